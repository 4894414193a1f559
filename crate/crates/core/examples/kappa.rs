//! Agreement between raters who labeled the same files.

use paradigm_profiler::corpus::agreement::{agreement_rate, cohen_kappa, fleiss_kappa, RatingMatrix};
use paradigm_profiler::Label::*;

fn main() {
    let ann = [OO, OO, Procedural, Functional, Mixed, Procedural];
    let bob = [OO, Procedural, Procedural, Functional, Mixed, Procedural];
    let amy = [OO, OO, Procedural, Imperative, Mixed, Procedural];

    let k = cohen_kappa(&ann, &bob).expect("equal lengths");
    let rate = agreement_rate(&ann, &bob).expect("equal lengths");
    println!("cohen  {:.3} ({}), raw agreement {:.1}%", k.value, k.interpretation(), 100.0 * rate);

    let rows = (0..ann.len()).map(|i| vec![ann[i], bob[i], amy[i]]).collect();
    let k = fleiss_kappa(&RatingMatrix::from_rows(rows).expect("rectangular"));
    println!("fleiss {:.3} ({}), observed {:.3}, chance {:.3}", k.value, k.interpretation(), k.observed, k.chance);
}
