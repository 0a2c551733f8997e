use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::graph::{ExtNat, Graph};

/// The linear system `A x = b, x ≥ 0` whose solutions are normalized graph traces.
///
/// Variables are `g(v)` for each vertex followed by one slack per infinite emitter.
#[derive(Clone, Debug, Serialize)]
pub struct TraceSystem {
    #[serde(serialize_with = "ser_int_rows")]
    pub a: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "ser_ints")]
    pub b: Vec<BigInt>,
    /// Human-readable description of each row.
    pub labels: Vec<String>,
    pub vertices: usize,
}

impl TraceSystem {
    pub fn for_graph(g: &Graph) -> Self {
        let n = g.len();
        let emitters: Vec<usize> = (0..n).filter(|&v| g.is_infinite_emitter(v)).collect();
        let width = n + emitters.len();
        let mut a = Vec::new();
        let mut labels = Vec::new();
        let flow_row = |v: usize| {
            let mut row = vec![BigInt::zero(); width];
            row[v] += 1;
            for w in 0..n {
                if let ExtNat::Finite(k) = g.mult(v, w) {
                    row[w] -= BigInt::from(k.clone());
                }
            }
            row
        };
        for v in 0..n {
            if g.is_regular(v) {
                a.push(flow_row(v));
                labels.push(format!("flow equality at {}", g.name(v)));
            }
        }
        for (k, &v) in emitters.iter().enumerate() {
            for w in (0..n).filter(|&w| g.mult(v, w).is_infinite()) {
                let mut row = vec![BigInt::zero(); width];
                row[w] = BigInt::one();
                a.push(row);
                labels.push(format!("{} receives infinitely many edges from {}", g.name(w), g.name(v)));
            }
            let mut row = flow_row(v);
            row[n + k] = BigInt::from(-1);
            a.push(row);
            labels.push(format!("flow inequality at {}", g.name(v)));
        }
        let mut b = vec![BigInt::zero(); a.len()];
        let mut norm = vec![BigInt::zero(); width];
        norm[..n].iter_mut().for_each(|x| *x = BigInt::one());
        a.push(norm);
        b.push(BigInt::one());
        labels.push("normalization".into());
        TraceSystem { a, b, labels, vertices: n }
    }

    pub fn width(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    /// `x ≥ 0` and `A x = b` exactly.
    pub fn satisfied_by(&self, x: &[BigRational]) -> bool {
        x.len() == self.width()
            && x.iter().all(|t| !t.is_negative())
            && self.a.iter().zip(&self.b).all(|(row, bi)| {
                let lhs: BigRational = row.iter().zip(x).map(|(c, t)| BigRational::from(c.clone()) * t).sum();
                lhs == BigRational::from(bi.clone())
            })
    }

    /// `Aᵀ y ≤ 0` and `bᵀ y > 0`, which rules out any solution.
    pub fn certifies_infeasible(&self, y: &[BigRational]) -> bool {
        if y.len() != self.a.len() {
            return false;
        }
        let cols_ok = (0..self.width()).all(|j| {
            let s: BigRational = self.a.iter().zip(y).map(|(row, yi)| BigRational::from(row[j].clone()) * yi).sum();
            !s.is_positive()
        });
        let by: BigRational = self.b.iter().zip(y).map(|(bi, yi)| BigRational::from(bi.clone()) * yi).sum();
        cols_ok && by.is_positive()
    }
}

/// Dual multipliers proving that no normalized trace exists.
#[derive(Clone, Debug, Serialize)]
pub struct TraceCertificate {
    #[serde(serialize_with = "ser_rats")]
    pub y: Vec<BigRational>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "result")]
pub enum TraceFeasibility {
    /// A graph trace with `Σ g(v) = 1`.
    Exists {
        #[serde(serialize_with = "ser_rats")]
        g: Vec<BigRational>,
    },
    None { certificate: TraceCertificate },
}

impl TraceFeasibility {
    pub fn exists(&self) -> bool {
        matches!(self, TraceFeasibility::Exists { .. })
    }

    /// Re-checks the witness or certificate against the graph's trace conditions.
    pub fn verify(&self, graph: &Graph) -> bool {
        let sys = TraceSystem::for_graph(graph);
        match self {
            TraceFeasibility::Exists { g } => {
                if g.len() != graph.len() {
                    return false;
                }
                let mut x = g.clone();
                for v in (0..graph.len()).filter(|&v| graph.is_infinite_emitter(v)) {
                    let mut s = g[v].clone();
                    for (w, gw) in g.iter().enumerate() {
                        if let ExtNat::Finite(k) = graph.mult(v, w) {
                            s -= BigRational::from(BigInt::from(k.clone())) * gw;
                        }
                    }
                    x.push(s);
                }
                sys.satisfied_by(&x)
            }
            TraceFeasibility::None { certificate } => sys.certifies_infeasible(&certificate.y),
        }
    }
}

/// Decides whether a nonzero bounded graph trace exists, by exact phase-one simplex.
pub fn graph_trace_feasibility(g: &Graph) -> TraceFeasibility {
    let sys = TraceSystem::for_graph(g);
    let out = match phase_one(&sys) {
        Ok(x) => TraceFeasibility::Exists { g: x[..sys.vertices].to_vec() },
        Err(y) => TraceFeasibility::None { certificate: TraceCertificate { y } },
    };
    debug_assert!(out.verify(g));
    out
}

/// Minimizes the sum of artificials with Bland's rule. Returns a feasible point or the
/// optimal dual multipliers, which form a Farkas certificate.
fn phase_one(sys: &TraceSystem) -> Result<Vec<BigRational>, Vec<BigRational>> {
    let (m, n) = (sys.a.len(), sys.width());
    let cols = n + m;
    let rat = |x: &BigInt| BigRational::from(x.clone());
    // rows: [A | I | b]; b ≥ 0 by construction
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRational> = sys.a[i].iter().map(rat).collect();
            row.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
            row.push(rat(&sys.b[i]));
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..cols).collect();
    let cost = |j: usize| if j >= n { BigRational::one() } else { BigRational::zero() };
    loop {
        let reduced = |j: usize, t: &[Vec<BigRational>], basis: &[usize]| {
            let mut r = cost(j);
            for (i, &bj) in basis.iter().enumerate() {
                r -= cost(bj) * &t[i][j];
            }
            r
        };
        let Some(enter) = (0..cols).find(|&j| reduced(j, &t, &basis).is_negative()) else {
            break;
        };
        let leave = (0..m)
            .filter(|&i| t[i][enter].is_positive())
            .min_by(|&i, &k| {
                let (ri, rk) = (&t[i][cols] / &t[i][enter], &t[k][cols] / &t[k][enter]);
                ri.cmp(&rk).then(basis[i].cmp(&basis[k]))
            })
            .expect("phase one is bounded below");
        let piv = t[leave][enter].clone();
        t[leave].iter_mut().for_each(|x| *x /= &piv);
        let prow = t[leave].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == leave || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            row.iter_mut().zip(&prow).for_each(|(x, p)| *x -= &f * p);
        }
        basis[leave] = enter;
    }
    let objective: BigRational = basis
        .iter()
        .enumerate()
        .filter(|(_, &bj)| bj >= n)
        .map(|(i, _)| t[i][cols].clone())
        .sum();
    if objective.is_zero() {
        let mut x = vec![BigRational::zero(); n];
        for (i, &bj) in basis.iter().enumerate() {
            if bj < n {
                x[bj] = t[i][cols].clone();
            }
        }
        return Ok(x);
    }
    // y = c_B B⁻¹, read off the artificial columns
    let y = (0..m)
        .map(|k| basis.iter().enumerate().map(|(i, &bj)| cost(bj) * &t[i][n + k]).sum())
        .collect();
    Err(y)
}

fn ser_rat_str(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn ser_rats<S: Serializer>(x: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(ser_rat_str))
}

fn ser_ints<S: Serializer>(x: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|v| v.to_string()))
}

fn ser_int_rows<S: Serializer>(x: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: Option<u64> = None;

    fn m(rows: &[&[Option<u64>]]) -> Graph {
        Graph::from_u64_matrix(rows)
    }

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn spec_examples() {
        let t = graph_trace_feasibility(&m(&[&[Some(0)]]));
        assert!(matches!(&t, TraceFeasibility::Exists { g } if *g == vec![r(1, 1)]));
        let t = graph_trace_feasibility(&m(&[&[Some(4)]]));
        assert!(!t.exists() && t.verify(&m(&[&[Some(4)]])));
        let g = m(&[&[Some(0), Some(1)], &[Some(0), Some(0)]]);
        let t = graph_trace_feasibility(&g);
        assert!(matches!(&t, TraceFeasibility::Exists { g } if *g == vec![r(1, 2), r(1, 2)]));
    }

    #[test]
    fn fourex_has_no_trace() {
        let g = m(&[&[Some(4), Some(1)], &[Some(0), Some(0)]]);
        let t = graph_trace_feasibility(&g);
        assert!(!t.exists() && t.verify(&g));
    }

    #[test]
    fn infinite_emitter_constraints() {
        let g = m(&[&[Some(0), INF], &[Some(0), Some(0)]]);
        let t = graph_trace_feasibility(&g);
        assert!(matches!(&t, TraceFeasibility::Exists { g } if *g == vec![r(1, 1), r(0, 1)]));
        assert!(t.verify(&g));
        let g = m(&[&[Some(2), INF], &[Some(0), INF]]);
        let t = graph_trace_feasibility(&g);
        assert!(t.verify(&g));
    }
}
