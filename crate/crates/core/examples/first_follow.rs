//! FIRST and FOLLOW sets of the tiny-Java grammar.

use peg_recovery::analysis::GrammarSets;
use peg_recovery::dsl::{parse_grammar, GrammarSource};

fn main() {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/corpus/grammars/tiny-java-plain.peg"
    );
    let g = parse_grammar(&GrammarSource::from_path(path).unwrap()).unwrap();
    let sets = GrammarSets::compute(&g);
    for rule in g.rules.iter().filter(|r| !r.is_lexical()) {
        println!(
            "{:<10} FIRST {:<40} FOLLOW {}",
            rule.name,
            sets.first(&rule.body).to_string(),
            sets.follow(&rule.name)
        );
    }
    for (site, follow) in sets.occurrence_follows("Exp") {
        println!("Exp #{} in {}: {follow}", site.ordinal, site.rule);
    }
}
