//! Recovery expressions built from FOLLOW sets. Adding them to every label
//! also shows how a label that sits in front of a closing token can produce
//! a second, spurious error.

use peg_recovery::analysis::{with_default_recovery, GrammarSets, LabelSelection};
use peg_recovery::dsl::{format_grammar, parse_grammar, GrammarSource};
use peg_recovery::engine::{run_parse, MatchOptions};
use peg_recovery::model::Label;
use peg_recovery::report::render;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let g =
        parse_grammar(&GrammarSource::from_path(format!("{dir}/grammars/tiny-java.peg")).unwrap())
            .unwrap();
    let condw = Label::new("condw").unwrap();
    println!(
        "FOLLOW of condw sites: {}",
        GrammarSets::compute(&g).label_follow(&condw)
    );

    let input = std::fs::read_to_string(format!("{dir}/programs/while-condition.java")).unwrap();
    let with = with_default_recovery(&g, &LabelSelection::Only(vec![condw.clone()])).unwrap();
    let text = format_grammar(&with);
    println!(
        "{}",
        text.lines()
            .find(|l| l.starts_with("recover condw"))
            .unwrap()
    );
    let report = run_parse(&with, &input, &MatchOptions::default().with_tree()).unwrap();
    for d in render(&report, &with, &input) {
        println!("  {d}");
    }
    if let Some(node) = report
        .outcome
        .tree
        .as_ref()
        .and_then(|t| t.recovery_nodes().next())
    {
        println!("  skipped {:?}", node.text(&input));
    }

    // Replace the hand-written rcblk recovery as well.
    let mut bare = g.clone();
    bare.recovery.clear();
    let all = with_default_recovery(&bare, &LabelSelection::All).unwrap();
    let input = std::fs::read_to_string(format!("{dir}/programs/fig2-program.java")).unwrap();
    let report = run_parse(&all, &input, &MatchOptions::default()).unwrap();
    println!("fig2-program.java with FOLLOW recovery for every label:");
    for d in render(&report, &all, &input) {
        println!("  {d}");
    }
}
