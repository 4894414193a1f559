//! Per-statement verdicts: intrinsic features, class enclosure and what
//! gets counted.

use paradigm_profiler::analyzer::analyze_statements;
use paradigm_profiler::{parse_source, SourceFile};

const SRC: &str = "\
import functools

class Account:
    rate = 0.02

    def grow(self, years):
        for _ in range(years):
            self.balance *= 1 + self.rate
        return self.balance

def total(accounts):
    return functools.reduce(lambda a, b: a + b.balance, accounts, 0)

print(total([]))
";

fn main() {
    let tree = parse_source(&SourceFile::new("account.py", SRC)).expect("valid source");
    for a in analyze_statements(&tree) {
        let line = SRC.lines().nth(a.line - 1).unwrap_or_default().trim();
        let features: Vec<&str> = a.features.iter().map(|k| k.row_label()).collect();
        println!("{:>3} {:<45} {:<28} {}", a.line, line, a.verdict.counted.to_string(), features.join(", "));
    }
}
