//! Grammars built in code print to the text format and read back unchanged.

use peg_recovery::dsl::{format_grammar, parse_grammar, GrammarSource};
use peg_recovery::model::{Expr, Grammar, Label, Rule};

fn main() {
    let close = Label::new("close").unwrap();
    let g = Grammar::from_rules(vec![
        Rule::new(
            "group",
            Expr::seq_all([
                Expr::t('('),
                Expr::star(Expr::nt("item")),
                Expr::t(')').annotated(close.clone()),
            ]),
        ),
        Rule::new(
            "item",
            Expr::choice(
                Expr::nt("group"),
                Expr::seq(Expr::not(Expr::t(')')), Expr::Any),
            ),
        ),
    ])
    .with_recovery(close.clone(), Expr::Empty)
    .with_message(close, "missing ')'");

    let text = format_grammar(&g);
    print!("{text}");
    let back = parse_grammar(&GrammarSource::memory(&text)).unwrap();
    println!(
        "round trip: {}",
        if back == g { "identical" } else { "different" }
    );
}
