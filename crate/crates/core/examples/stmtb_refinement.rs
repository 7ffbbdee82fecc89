//! Labeling each statement of a block and synchronizing on the next
//! statement start avoids skipping the rest of the block.

use peg_recovery::dsl::{parse_grammar, GrammarSource};
use peg_recovery::engine::{run_parse, MatchOptions};
use peg_recovery::report::render;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let input = std::fs::read_to_string(format!("{dir}/programs/fig2-program.java")).unwrap();
    for grammar in ["tiny-java.peg", "tiny-java-stmtb.peg"] {
        let g =
            parse_grammar(&GrammarSource::from_path(format!("{dir}/grammars/{grammar}")).unwrap())
                .unwrap();
        let report = run_parse(&g, &input, &MatchOptions::default().with_tree()).unwrap();
        println!("{grammar}:");
        for d in render(&report, &g, &input) {
            println!("  {d}");
        }
        let prints = report
            .outcome
            .tree
            .as_ref()
            .map_or(0, |t| t.find_all("PrintStmt").count());
        println!("  print statements in the tree: {prints}");
    }
}
