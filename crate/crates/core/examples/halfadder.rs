use spacetime::synth::{equality_combine, minimize, table_to_minterms, FunctionTable};

fn main() {
    let form = table_to_minterms(&FunctionTable::half_adder());
    let min = minimize(&form);
    print!("{min}");
    println!("minterm cost: {}", form.cost());
    println!("minimized cost: {}", min.cost());
    let eq = equality_combine(&form);
    println!("equality-combined cost: {}", eq.after);
}
