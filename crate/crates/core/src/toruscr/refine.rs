use super::torus::{flag_from_weights, weight_blocks};
use crate::error::{check_dim, Error, Result};
use crate::flags::Flag;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    /// Positive integers `n_i`.
    pub coefficients: Vec<i64>,
    /// `Σ n_i w_i`.
    pub combined: Vec<i64>,
    /// Some total order of coordinates is weakly decreasing for every input.
    pub compatible: bool,
    pub flag: Flag,
}

/// Coordinates grouped by equal value tuples across all `ws`.
pub fn join_partition(ws: &[Vec<i64>], n: usize) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match blocks
            .iter_mut()
            .find(|b| ws.iter().all(|w| w[b[0]] == w[i]))
        {
            Some(b) => b.push(i),
            None => blocks.push(vec![i]),
        }
    }
    blocks
}

/// Kahn's algorithm on the union of the strict relations `w[i] > w[j]`.
pub fn common_borel_order(ws: &[Vec<i64>], n: usize) -> Option<Vec<usize>> {
    let mut indegree = vec![0usize; n];
    let mut edges = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if ws.iter().any(|w| w[i] > w[j]) {
                edges[i].push(j);
                indegree[j] += 1;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    while let Some(i) = ready.pop() {
        order.push(i);
        for &j in &edges[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.push(j);
            }
        }
    }
    (order.len() == n).then_some(order)
}

fn same_partition(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    let canon = |p: &[Vec<usize>]| {
        let mut v: Vec<Vec<usize>> = p
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b
            })
            .collect();
        v.sort();
        v
    };
    canon(a) == canon(b)
}

/// Positive `n_i = M^{m-i}`, `M = 1 + 2·m·max|w|`, so that the flag of
/// `Σ n_i w_i` has the join of the inputs' partitions; with a common Borel
/// order its chain is the union of the input chains.
pub fn common_refinement(ws: &[Vec<i64>], require_compatible: bool) -> Result<Refinement> {
    let n = ws
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidInput("no weight vectors".into()))?;
    for w in ws {
        check_dim(n, w.len())?;
    }
    let compatible = common_borel_order(ws, n).is_some();
    if require_compatible && !compatible {
        return Err(Error::Incompatible(
            "strict weight relations contain a cycle".into(),
        ));
    }
    let m = ws.len();
    let overflow = || Error::InvalidInput("weight coefficients overflow".into());
    let max = ws.iter().flatten().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    let base = i64::try_from(max)
        .ok()
        .and_then(|x| x.checked_mul(2 * m as i64))
        .and_then(|x| x.checked_add(1))
        .ok_or_else(overflow)?;
    let coefficients: Vec<i64> = (0..m)
        .map(|i| base.checked_pow((m - 1 - i) as u32).ok_or_else(overflow))
        .collect::<Result<_>>()?;
    let combined: Vec<i64> = (0..n)
        .map(|j| {
            ws.iter().zip(&coefficients).try_fold(0i64, |acc, (w, &c)| {
                w[j].checked_mul(c).and_then(|v| acc.checked_add(v))
            })
            .ok_or_else(overflow)
        })
        .collect::<Result<_>>()?;
    let flag = flag_from_weights(&combined);

    if !same_partition(&weight_blocks(&combined), &join_partition(ws, n)) {
        return Err(Error::InternalInconsistency(
            "combined weight does not realise the join partition".into(),
        ));
    }
    if compatible {
        for w in ws {
            let f = flag_from_weights(w);
            if !f.chain().iter().all(|s| flag.chain().contains(s)) {
                return Err(Error::InternalInconsistency(
                    "combined flag misses a member of an input flag".into(),
                ));
            }
        }
    }
    Ok(Refinement {
        coefficients,
        combined,
        compatible,
        flag,
    })
}
