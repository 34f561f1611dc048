use distinctq::conjecture::{filter_order8, survey_order7};

fn main() {
    let r7 = survey_order7().expect("order 7 survey");
    println!("order 7: {} graphs, {} pairs, {:?} after cycle filter, passed {}", r7.total_graphs, r7.total_pairs, r7.pairs_after_cycle_filter, r7.passed);
    for f in &r7.failures {
        println!("  {f}");
    }
    println!("  {:?}", r7.verdict_histogram);
    let r8 = filter_order8().expect("order 8 filter");
    for s in &r8.stage_counts {
        println!("order 8 {}: {}", s.stage, s.pairs);
    }
    for f in &r8.failures {
        println!("  {f}");
    }
}
