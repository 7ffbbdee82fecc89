//! The well-formedness check rejects grammars that could loop, including
//! loops introduced by recovery expressions.

use peg_recovery::analysis::check_well_formed;
use peg_recovery::dsl::{parse_grammar, GrammarSource};

fn main() {
    let grammars = [
        "expr <- expr '+' 'n' / 'n'\n",
        "list <- ('a' / ())*\n",
        "list <- ('a' ^ item)*\nrecover item <- ()\n",
        "list <- ('a' ^ item)*\nrecover item <- (!'a' .) (!'a' .)*\n",
    ];
    for text in grammars {
        let g = parse_grammar(&GrammarSource::memory(text)).unwrap();
        let diags = check_well_formed(&g);
        println!("{}", text.replace('\n', " | "));
        if diags.is_empty() {
            println!("  OK");
        }
        for d in diags {
            println!("  {d}");
        }
    }
}
