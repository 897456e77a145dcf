//! Exhaustive enumeration of survival patterns against the closed form, in
//! exact rational arithmetic.
//!
//!     cargo run --example oracle_check -- 5 1/3 2

use spacings::oracle::{parse_rational, OracleCheck};

fn main() -> spacings::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(5);
    let p = parse_rational(args.get(1).map(String::as_str).unwrap_or("1/3"))?;
    let i: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(2);

    let check = OracleCheck::run(n, &p, i)?;
    println!("n={n} p={p} i={i}");
    for ((d, e), (_, c)) in check.enumerated.iter().zip(check.closed_form.iter()) {
        println!("d={d:<3} enumerated={e:<30} closed_form={c}");
    }
    println!("{}", if check.matches() { "MATCH" } else { "MISMATCH" });
    Ok(())
}
