//! Scores documents with Rao's coefficient over angular topic distances.
//!
//!     cargo run --example diversity_scores

use hitr::{score_corpus, SparseDistribution, TopicDistanceMatrix};

fn main() -> hitr::Result<()> {
    // Topics 0 and 1 tend to co-occur; topic 2 appears on its own.
    let rows = vec![
        SparseDistribution::new(3, vec![(0, 0.6), (1, 0.4)])?,
        SparseDistribution::new(3, vec![(0, 0.5), (1, 0.5)])?,
        SparseDistribution::new(3, vec![(2, 1.0)])?,
        SparseDistribution::new(3, vec![(0, 0.5), (2, 0.5)])?,
        SparseDistribution::point(3, 1),
    ];
    let delta = TopicDistanceMatrix::from_doc_topic(&rows)?;
    for i in 0..3 {
        let row: Vec<String> = (0..3).map(|j| format!("{:.3}", delta.get(i, j))).collect();
        println!("δ[{i}] = [{}]", row.join(", "));
    }
    let ids: Vec<String> = (0..rows.len()).map(|i| format!("doc{i}")).collect();
    for s in score_corpus(&rows, &ids)? {
        println!("{}: {:.4}", s.doc_id, s.score);
    }
    Ok(())
}
