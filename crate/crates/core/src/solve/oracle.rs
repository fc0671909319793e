//! Exhaustive references used to verify the solvers and the gadgets.

use crate::conflict::ConflictGraph;
use crate::error::{Error, Result};
use crate::model::{CandidateSet, EdgeId, Placement, SolverTag};

pub const DEFAULT_ORACLE_CAP: u128 = 1_000_000;

fn check_cap(cs: &CandidateSet, cap: u128) -> Result<()> {
    let size = cs.search_space();
    if size > cap {
        return Err(Error::OracleCapExceeded { size, cap });
    }
    Ok(())
}

/// Visits every complete assignment in lexicographic order of the choice
/// vector (edge 0 most significant) with its conflict count and rank sum.
fn for_each_assignment(
    cs: &CandidateSet,
    cg: &ConflictGraph,
    mut visit: impl FnMut(&[usize], usize, u64),
) {
    let n = cs.num_edges();
    let sizes: Vec<usize> = cs.per_edge().iter().map(Vec::len).collect();
    let mut choice = vec![0usize; n];
    let mut chosen = vec![false; cg.num_nodes()];
    for e in 0..n {
        chosen[cg.node(EdgeId(e), 0)] = true;
    }
    loop {
        let mut overlaps = 0;
        let mut ranks = 0u64;
        for (e, &i) in choice.iter().enumerate() {
            let node = cg.node(EdgeId(e), i);
            ranks += (i + 1) as u64;
            overlaps += cg
                .neighbors(node)
                .iter()
                .filter(|&&b| (b as usize) > node && chosen[b as usize])
                .count();
        }
        visit(&choice, overlaps, ranks);

        // Odometer step, last edge fastest.
        let mut e = n;
        loop {
            if e == 0 {
                return;
            }
            e -= 1;
            chosen[cg.node(EdgeId(e), choice[e])] = false;
            choice[e] += 1;
            if choice[e] < sizes[e] {
                chosen[cg.node(EdgeId(e), choice[e])] = true;
                break;
            }
            choice[e] = 0;
            chosen[cg.node(EdgeId(e), 0)] = true;
        }
    }
}

/// Enumerates all `prod |A_e|` placements and returns the minimum of
/// `overlaps + rank_sum / M`, ties broken by the lexicographically least
/// choice vector. Refuses when the product exceeds `cap`.
pub fn brute_force_oracle(
    cs: &CandidateSet,
    cg: &ConflictGraph,
    m: f64,
    cap: u128,
) -> Result<Placement> {
    check_cap(cs, cap)?;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for_each_assignment(cs, cg, |choice, overlaps, ranks| {
        let key = overlaps as f64 * m + ranks as f64;
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, choice.to_vec()));
        }
    });
    let (_, choice) = best.expect("at least one assignment");
    Ok(cs.placement(&choice, SolverTag::Exact, true))
}

/// Number of zero-overlap placements, by full enumeration.
pub fn count_zero_overlap_exhaustive(
    cs: &CandidateSet,
    cg: &ConflictGraph,
    cap: u128,
) -> Result<u64> {
    check_cap(cs, cap)?;
    let mut count = 0;
    for_each_assignment(cs, cg, |_, overlaps, _| {
        if overlaps == 0 {
            count += 1;
        }
    });
    Ok(count)
}

/// Number of zero-overlap placements (up to `limit`) that agree with every
/// `Some` entry of `fixed`. Complete backtracking search that only extends
/// conflict-free partial placements, picking the edge with the fewest
/// remaining options first.
pub fn count_zero_overlap(
    cs: &CandidateSet,
    cg: &ConflictGraph,
    fixed: &[Option<usize>],
    limit: u64,
) -> u64 {
    assert_eq!(fixed.len(), cs.num_edges());
    let mut search = ZeroSearch {
        cg,
        fixed,
        hits: vec![0; cg.num_nodes()],
        decided: vec![false; cs.num_edges()],
        count: 0,
        limit,
    };
    search.run(cs.num_edges());
    search.count
}

struct ZeroSearch<'a> {
    cg: &'a ConflictGraph,
    fixed: &'a [Option<usize>],
    hits: Vec<u32>,
    decided: Vec<bool>,
    count: u64,
    limit: u64,
}

impl ZeroSearch<'_> {
    fn options(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        let range = self.cg.nodes_of(EdgeId(e));
        let start = range.start;
        range
            .filter(move |&n| self.fixed[e].is_none_or(|f| n - start == f))
            .filter(|&n| self.hits[n] == 0)
    }

    fn set(&mut self, node: usize, delta: i32) {
        for &b in self.cg.neighbors(node) {
            self.hits[b as usize] = (self.hits[b as usize] as i32 + delta) as u32;
        }
    }

    fn run(&mut self, remaining: usize) {
        if self.count >= self.limit {
            return;
        }
        if remaining == 0 {
            self.count += 1;
            return;
        }
        let mut best: Option<(usize, usize)> = None;
        for e in (0..self.decided.len()).filter(|&e| !self.decided[e]) {
            let n = self.options(e).count();
            if best.is_none_or(|(_, bn)| n < bn) {
                best = Some((e, n));
                if n == 0 {
                    return;
                }
            }
        }
        let (e, _) = best.expect("undecided edge");
        let opts: Vec<usize> = self.options(e).collect();
        self.decided[e] = true;
        for node in opts {
            self.set(node, 1);
            self.run(remaining - 1);
            self.set(node, -1);
        }
        self.decided[e] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conflict::build_full;
    use crate::geom::Point;
    use crate::model::{overlap_number_with_radius, ArrowPosition};

    fn cs_from(groups: Vec<Vec<(f64, f64)>>) -> CandidateSet {
        let per_edge = groups
            .into_iter()
            .enumerate()
            .map(|(e, pts)| {
                pts.into_iter()
                    .enumerate()
                    .map(|(i, (x, y))| ArrowPosition {
                        edge: EdgeId(e),
                        center: Point::new(x, y),
                        rank: i as u32 + 1,
                        valid: true,
                    })
                    .collect()
            })
            .collect();
        CandidateSet::new(1.0, per_edge).unwrap()
    }

    #[test]
    fn single_edge_takes_rank_one() {
        let cs = cs_from(vec![vec![(0.0, 0.0), (5.0, 0.0), (9.0, 0.0)]]);
        let cg = build_full(&cs);
        let pl = brute_force_oracle(&cs, &cg, cs.default_m(), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(pl.positions[0].rank, 1);
    }

    #[test]
    fn unavoidable_conflict() {
        let cs = cs_from(vec![vec![(0.0, 0.0)], vec![(1.0, 0.0)]]);
        let cg = build_full(&cs);
        let pl = brute_force_oracle(&cs, &cg, cs.default_m(), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(overlap_number_with_radius(&pl, 1.0), 1);
        assert_eq!(count_zero_overlap_exhaustive(&cs, &cg, 100).unwrap(), 0);
        assert_eq!(count_zero_overlap(&cs, &cg, &[None, None], u64::MAX), 0);
    }

    #[test]
    fn refuses_over_cap() {
        let cs = cs_from(vec![vec![(0.0, 0.0), (3.0, 0.0)]; 4]);
        let cg = build_full(&cs);
        assert!(matches!(
            brute_force_oracle(&cs, &cg, 1.0, 15),
            Err(Error::OracleCapExceeded { size: 16, cap: 15 })
        ));
    }

    #[test]
    fn backtracking_agrees_with_enumeration() {
        // Three edges on a line with two positions each.
        let cs = cs_from(vec![
            vec![(0.0, 0.0), (4.0, 0.0)],
            vec![(1.0, 0.0), (8.0, 0.0)],
            vec![(5.0, 0.0), (20.0, 0.0)],
        ]);
        let cg = build_full(&cs);
        let all = count_zero_overlap_exhaustive(&cs, &cg, 100).unwrap();
        assert_eq!(count_zero_overlap(&cs, &cg, &[None; 3], u64::MAX), all);
        assert_eq!(
            count_zero_overlap(&cs, &cg, &[Some(0), None, None], u64::MAX),
            2
        );
        assert_eq!(all, 4);
    }
}
