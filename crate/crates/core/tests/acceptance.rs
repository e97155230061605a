//! One PASS/FAIL line per acceptance criterion. Exits nonzero only when a
//! criterion fails without a documented shortfall.

use dbal_core::harness::acceptance::{run_all, shortfall};

fn main() {
    let outcomes = run_all();
    let mut unexplained = 0;
    for o in &outcomes {
        println!("{}", o.line());
        if !o.pass {
            match shortfall(o.id) {
                Some(why) => println!("      known shortfall: {why}"),
                None => unexplained += 1,
            }
        }
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("{passed}/{} criteria pass", outcomes.len());
    if unexplained > 0 {
        std::process::exit(1);
    }
}
