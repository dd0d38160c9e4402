//! Basic blocks `B^(k)(n, j)`: the k-coding of the first `dim(n, j)` orbit
//! steps of the minimal path into `v(n, j)`.
//!
//! Blocks are never stored flat. A [`BlockDag`] keeps one node per `(n, j)`
//! whose children are the blocks one level up and runs of spacers, exactly as
//! the recursion builds them; lengths are cached as exact integers. Any window
//! can be expanded in time proportional to its length plus the DAG depth.

mod alphabet;
mod dag;
mod word;

pub use alphabet::Alphabet;
pub use dag::{BlockDag, BlockHandle, Letters};
pub use word::{Letter, Word};

use crate::{OrderedDiagram, Result};

/// Handle to `B^(k)(n, j)`, building the DAG through level `n`.
pub fn basic_block(diagram: &OrderedDiagram, n: usize, j: usize, k: usize) -> Result<BlockHandle> {
    BlockDag::build(diagram, k, n)?.block(n, j)
}

/// Level-`k` vertices visited by the explicit appearances inside `B(n, j)`.
pub fn vertex_coding(diagram: &OrderedDiagram, n: usize, j: usize, k: usize, limit: u64) -> Result<Vec<usize>> {
    BlockDag::build(diagram, k, n)?.vertex_coding(n, j, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{RecursionStep, RecursionTable};

    fn fig1b() -> OrderedDiagram {
        OrderedDiagram::from_recursion(&RecursionTable::rank_one(&[vec![1], vec![1, 0]], Some(2))).unwrap()
    }

    fn sec4() -> OrderedDiagram {
        let st = RecursionStep::new;
        OrderedDiagram::from_recursion(&RecursionTable {
            seeds: vec![vec![0], vec![1]],
            steps: vec![
                vec![vec![st(1, 1), st(2, 0)], vec![st(1, 1), st(2, 0)], vec![st(2, 1), st(1, 0)]],
                vec![
                    vec![st(1, 1), st(3, 2), st(2, 1), st(3, 0)],
                    vec![st(2, 1), st(3, 2), st(1, 1), st(3, 1)],
                ],
            ],
            stationary_from: None,
        })
        .unwrap()
    }

    fn text(h: &BlockHandle) -> String {
        h.expand_all(1 << 20).unwrap().to_string()
    }

    #[test]
    fn rank_one_blocks() {
        let d = fig1b();
        let dag = BlockDag::build(&d, 1, 4).unwrap();
        assert_eq!(text(&dag.block(2, 1).unwrap()), "0s");
        assert_eq!(text(&dag.block(3, 1).unwrap()), "0ss0s");
        assert_eq!(text(&dag.block(4, 1).unwrap()), "0ss0ss0ss0s");
        assert_eq!(text(&dag.block(4, 2).unwrap()), "s");
        assert_eq!(dag.block(4, 1).unwrap().len_u64(), Some(11));
    }

    #[test]
    fn windows() {
        let b = basic_block(&fig1b(), 4, 1, 1).unwrap();
        // offsets are 0-based, matching explicit positions
        assert_eq!(b.expand(3, 5).unwrap().to_string(), "0ss0s");
        assert_eq!(b.expand(2, 5).unwrap().to_string(), "s0ss0");
        assert!(b.expand(0, 0).unwrap().is_empty());
        assert!(b.expand(7, 5).is_err());
        for off in 0..=11 {
            let tail: String = b.letters_from(off).unwrap().map(|l| l.to_string()).collect();
            assert_eq!(tail, &"0ss0ss0ss0s"[off as usize..]);
        }
    }

    #[test]
    fn explicit_versus_all_occurrences() {
        let d = fig1b();
        let dag = BlockDag::build(&d, 1, 4).unwrap();
        assert_eq!(dag.explicit_positions(3, 1, 4, 1, 100).unwrap(), vec![0, 6]);
        let inner = dag.block(3, 1).unwrap().expand_all(100).unwrap();
        let outer = dag.block(4, 1).unwrap();
        assert_eq!(dag.all_occurrences(&outer, &inner).unwrap(), vec![0, 3, 6]);
        assert_eq!(dag.explicit_positions(4, 1, 4, 1, 100).unwrap(), vec![0]);
        assert_eq!(dag.explicit_positions(2, 2, 3, 1, 100).unwrap(), vec![2]);

        let s = Word::parse("s").unwrap();
        assert_eq!(dag.all_occurrences(&dag.block(3, 1).unwrap(), &s).unwrap(), vec![1, 2, 4]);
        assert!(dag.all_occurrences(&outer, &Word::empty()).is_err());
    }

    #[test]
    fn seeds_are_symbol_runs() {
        let d = sec4();
        let dag = BlockDag::build(&d, 2, 3).unwrap();
        assert_eq!(dag.alphabet().size(), 10);
        assert_eq!(text(&dag.block(2, 1).unwrap()), "012");
        assert_eq!(text(&dag.block(2, 2).unwrap()), "345");
        assert_eq!(text(&dag.block(2, 3).unwrap()), "678");
        assert_eq!(text(&dag.block(2, 4).unwrap()), "s");
    }

    #[test]
    fn vertex_coding_counts_each_spacer() {
        let d = sec4();
        assert_eq!(vertex_coding(&d, 3, 1, 2, 100).unwrap(), vec![1, 4, 3, 4, 4, 2, 4, 3]);
        assert_eq!(vertex_coding(&d, 3, 3, 2, 100).unwrap(), vec![4]);
    }

    #[test]
    fn factor_map_lowers_depth() {
        let d = sec4();
        let b2 = basic_block(&d, 3, 1, 2).unwrap();
        let b1 = basic_block(&d, 3, 1, 1).unwrap();
        let w2 = b2.expand_all(1000).unwrap();
        let w1 = b2.dag().alphabet().factor_map(&d, &w2, 1).unwrap();
        assert_eq!(w1, b1.expand_all(1000).unwrap());
        assert_eq!(w1.to_string(), "0s1s1s0ss0s1s1s0");
        assert_eq!(b2.dag().alphabet().factor_map(&d, &w2, 2).unwrap(), w2);
    }

    #[test]
    fn depth_must_not_exceed_level() {
        assert!(basic_block(&fig1b(), 2, 1, 3).is_err());
    }
}
