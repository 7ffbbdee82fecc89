//! Labels name the error directly. Without recovery the first thrown label
//! ends the parse.

use peg_recovery::dsl::{parse_grammar, GrammarSource};
use peg_recovery::engine::{run_parse, MatchOptions, Rejection};

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let g =
        parse_grammar(&GrammarSource::from_path(format!("{dir}/grammars/tiny-java.peg")).unwrap())
            .unwrap();
    for program in ["fig2-program.java", "fig2-semia-fixed.java"] {
        let input = std::fs::read_to_string(format!("{dir}/programs/{program}")).unwrap();
        let report = run_parse(&g, &input, &MatchOptions::default().without_recovery()).unwrap();
        if let Some(Rejection::Aborted { label, at }) = &report.rejection {
            println!(
                "{program}: {label} at offset {} ({})",
                at.0, g.messages[label]
            );
        }
    }
}
