//! A plain PEG reports the farthest position where any alternative failed,
//! together with what was expected there.

use peg_recovery::dsl::{parse_grammar, GrammarSource};
use peg_recovery::engine::{run_parse, MatchOptions};
use peg_recovery::report::render;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let g = parse_grammar(
        &GrammarSource::from_path(format!("{dir}/grammars/tiny-java-plain.peg")).unwrap(),
    )
    .unwrap();
    for program in ["fig2-program.java", "fig2-semia-fixed.java"] {
        let input = std::fs::read_to_string(format!("{dir}/programs/{program}")).unwrap();
        let report = run_parse(&g, &input, &MatchOptions::default()).unwrap();
        println!("{program}: {}", report.status.as_str());
        for d in render(&report, &g, &input) {
            println!("  {d}");
        }
    }
}
