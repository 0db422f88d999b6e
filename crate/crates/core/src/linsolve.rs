//! Exact sparse Gauss-Jordan elimination over the rationals.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

/// One linear equation `Σ coeffs[j]·x_j = rhs`.
#[derive(Debug, Clone, Default)]
pub struct Equation {
    pub coeffs: BTreeMap<usize, BigRational>,
    pub rhs: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// A particular solution with every free unknown set to zero.
    pub values: Vec<BigRational>,
    pub rank: usize,
    /// Unknowns left undetermined by the system.
    pub free: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistent {
    pub rank: usize,
    pub equations: usize,
}

fn axpy(target: &mut Equation, factor: &BigRational, row: &Equation) {
    for (j, c) in &row.coeffs {
        let entry = target.coeffs.entry(*j).or_insert_with(BigRational::zero);
        *entry -= factor * c;
        if entry.is_zero() {
            target.coeffs.remove(j);
        }
    }
    target.rhs -= factor * &row.rhs;
}

/// Solves the system, returning the particular solution with free unknowns
/// at zero, or the rank diagnostics if it is inconsistent.
pub fn solve(equations: Vec<Equation>, unknowns: usize) -> Result<Solution, Inconsistent> {
    let total = equations.len();
    // pivot column -> reduced row, kept fully reduced against all pivots
    let mut pivots: BTreeMap<usize, Equation> = BTreeMap::new();
    for mut eq in equations {
        // eliminate existing pivots from the new row
        let hits: Vec<usize> = eq
            .coeffs
            .keys()
            .filter(|j| pivots.contains_key(j))
            .copied()
            .collect();
        for j in hits {
            let Some(c) = eq.coeffs.get(&j).cloned() else {
                continue;
            };
            axpy(&mut eq, &c, &pivots[&j]);
        }
        let Some((&col, lead)) = eq.coeffs.iter().next() else {
            if eq.rhs.is_zero() {
                continue;
            }
            return Err(Inconsistent {
                rank: pivots.len(),
                equations: total,
            });
        };
        let inv = lead.recip();
        for c in eq.coeffs.values_mut() {
            *c *= &inv;
        }
        eq.rhs *= &inv;
        // back-substitute the new pivot into the existing rows
        for row in pivots.values_mut() {
            if let Some(c) = row.coeffs.get(&col).cloned() {
                axpy(row, &c, &eq);
            }
        }
        pivots.insert(col, eq);
    }
    let mut values = vec![BigRational::zero(); unknowns];
    for (col, row) in &pivots {
        values[*col] = row.rhs.clone();
    }
    let free = (0..unknowns).filter(|j| !pivots.contains_key(j)).collect();
    Ok(Solution {
        values,
        rank: pivots.len(),
        free,
    })
}

/// Result of [`solve_by_blocks`].
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSolution {
    pub values: Vec<BigRational>,
    /// Rank and free unknowns over the blocks that were solved.
    pub rank: usize,
    pub free: Vec<usize>,
    /// Unknowns in homogeneous blocks, set to zero without elimination.
    pub skipped: usize,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Splits the system into blocks with no shared unknowns and solves each
/// one; blocks whose right-hand sides all vanish get the zero solution.
pub fn solve_by_blocks(
    equations: Vec<Equation>,
    unknowns: usize,
) -> Result<BlockSolution, Inconsistent> {
    let total = equations.len();
    let mut parent: Vec<usize> = (0..unknowns).collect();
    for eq in &equations {
        let mut cols = eq.coeffs.keys();
        if let Some(&first) = cols.next() {
            for &j in cols {
                let (a, b) = (find(&mut parent, first), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut blocks: BTreeMap<usize, Vec<Equation>> = BTreeMap::new();
    for eq in equations {
        let Some(&first) = eq.coeffs.keys().next() else {
            if eq.rhs.is_zero() {
                continue;
            }
            return Err(Inconsistent {
                rank: 0,
                equations: total,
            });
        };
        blocks.entry(find(&mut parent, first)).or_default().push(eq);
    }
    let mut out = BlockSolution {
        values: vec![BigRational::zero(); unknowns],
        rank: 0,
        free: Vec::new(),
        skipped: 0,
    };
    let mut solved = vec![false; unknowns];
    for (root, eqs) in blocks {
        let members: Vec<usize> = (0..unknowns)
            .filter(|&j| find(&mut parent, j) == root)
            .collect();
        if eqs.iter().all(|e| e.rhs.is_zero()) {
            out.skipped += members.len();
            members.iter().for_each(|&j| solved[j] = true);
            continue;
        }
        let local: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(i, &j)| (j, i)).collect();
        let eqs = eqs
            .into_iter()
            .map(|e| Equation {
                coeffs: e.coeffs.into_iter().map(|(j, c)| (local[&j], c)).collect(),
                rhs: e.rhs,
            })
            .collect();
        let sol = solve(eqs, members.len()).map_err(|e| Inconsistent {
            rank: out.rank + e.rank,
            equations: total,
        })?;
        out.rank += sol.rank;
        for (i, v) in sol.values.into_iter().enumerate() {
            out.values[members[i]] = v;
            solved[members[i]] = true;
        }
        out.free.extend(sol.free.into_iter().map(|i| members[i]));
    }
    // unknowns appearing in no equation at all
    out.free.extend((0..unknowns).filter(|&j| !solved[j]));
    out.free.sort_unstable();
    Ok(out)
}

/// Rank of a set of vectors given as sparse rows.
pub fn rank(rows: Vec<BTreeMap<usize, BigRational>>, width: usize) -> usize {
    let eqs = rows
        .into_iter()
        .map(|coeffs| Equation {
            coeffs,
            rhs: BigRational::zero(),
        })
        .collect();
    solve(eqs, width).map(|s| s.rank).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn eq(coeffs: &[(usize, i64)], rhs: i64) -> Equation {
        Equation {
            coeffs: coeffs.iter().map(|&(j, c)| (j, q(c))).collect(),
            rhs: q(rhs),
        }
    }

    #[test]
    fn solves_a_square_system() {
        // x + y = 3, x − y = 1
        let s = solve(vec![eq(&[(0, 1), (1, 1)], 3), eq(&[(0, 1), (1, -1)], 1)], 2).unwrap();
        assert_eq!(s.values, vec![q(2), q(1)]);
        assert_eq!(s.rank, 2);
        assert!(s.free.is_empty());
    }

    #[test]
    fn underdetermined_sets_free_to_zero() {
        let s = solve(vec![eq(&[(0, 1), (2, 2)], 4)], 3).unwrap();
        assert_eq!(s.values, vec![q(4), q(0), q(0)]);
        assert_eq!(s.free, vec![1, 2]);
    }

    #[test]
    fn reports_inconsistency() {
        let r = solve(vec![eq(&[(0, 1)], 1), eq(&[(0, 2)], 3)], 1);
        assert_eq!(
            r,
            Err(Inconsistent {
                rank: 1,
                equations: 2
            })
        );
    }

    #[test]
    fn blocks_agree_with_the_full_solve() {
        let eqs = vec![
            eq(&[(0, 1), (2, 1)], 3),
            eq(&[(0, 1), (2, -1)], 1),
            eq(&[(1, 1), (3, 1)], 0),
            eq(&[(4, 2)], 4),
        ];
        let b = solve_by_blocks(eqs.clone(), 6).unwrap();
        let f = solve(eqs, 6).unwrap();
        assert_eq!(b.values, f.values);
        assert_eq!(b.skipped, 2);
        assert_eq!(b.free, vec![5]);
        let bad = vec![eq(&[(0, 1)], 1), eq(&[(0, 1)], 2), eq(&[(1, 1)], 0)];
        assert!(solve_by_blocks(bad, 2).is_err());
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            [(0, q(1)), (1, q(2))].into_iter().collect(),
            [(0, q(2)), (1, q(4))].into_iter().collect(),
            [(2, q(1))].into_iter().collect(),
        ];
        assert_eq!(rank(rows, 3), 2);
    }
}
