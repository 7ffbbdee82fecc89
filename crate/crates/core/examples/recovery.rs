//! Recovery expressions let one pass report several errors. The log keeps
//! every recovered label in order.

use peg_recovery::engine::{run_parse, MatchOptions};
use peg_recovery::model::{Expr, Grammar, Label, Rule};
use peg_recovery::report::render;

fn main() {
    // list <- item (',' item)* ; item <- [0-9] ^ num
    let digit = Expr::choice_all(('0'..='9').map(Expr::t)).unwrap();
    let num = Label::new("num").unwrap();
    let item = digit.annotated(num.clone());
    let list = Expr::seq(
        Expr::nt("item"),
        Expr::star(Expr::seq(Expr::t(','), Expr::nt("item"))),
    );
    let skip = Expr::star(Expr::seq(Expr::not(Expr::t(',')), Expr::Any));
    let g = Grammar::from_rules(vec![Rule::new("list", list), Rule::new("item", item)])
        .with_recovery(num.clone(), skip)
        .with_message(num, "expected a digit");

    let input = "1,x,3,,5";
    let report = run_parse(&g, input, &MatchOptions::default()).unwrap();
    println!("{input:?}: {}", report.status.as_str());
    for record in &report.outcome.log {
        println!("  logged {} at {}", record.label, record.at.0);
    }
    for d in render(&report, &g, input) {
        println!("  {d}");
    }
}
