use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use super::matrix::{BigIntSeq, IntMatrix};
use super::smith::{smith_normal_form, SmithDecomposition};

/// A finitely generated abelian group `Z^g / im(R)` given by a relation matrix whose
/// columns are relations, together with the Smith data that identifies it with its
/// normal form `Z^free ⊕ Z_{d₁} ⊕ ... ⊕ Z_{d_k}` (`d₁ | ... | d_k`, each `> 1`).
#[derive(Clone, PartialEq, Eq)]
pub struct FgAbGroup {
    relations: IntMatrix,
    smith: SmithDecomposition,
    /// Smith indices that survive in the normal form, free ones first.
    selected: Vec<usize>,
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    /// Cokernel of `relations : Z^cols -> Z^rows`.
    pub fn from_relations(relations: IntMatrix) -> Self {
        let smith = smith_normal_form(&relations);
        let g = relations.rows();
        let diag = smith.diagonal();
        let free: Vec<usize> = (smith.rank..g).collect();
        let tors: Vec<usize> = (0..smith.rank).filter(|&i| !diag[i].is_one()).collect();
        let torsion = tors.iter().map(|&i| diag[i].clone()).collect();
        let free_rank = free.len();
        let mut selected = free;
        selected.extend(tors);
        FgAbGroup {
            relations,
            smith,
            selected,
            free_rank,
            torsion,
        }
    }

    /// `Z^rank` with no relations.
    pub fn free(rank: usize) -> Self {
        Self::from_relations(IntMatrix::zeros(rank, 0))
    }

    /// The group already in normal form: `Z^free ⊕ ⊕ Z_{d}` for the given factors.
    pub fn normal(free_rank: usize, torsion: &[BigInt]) -> Self {
        let g = free_rank + torsion.len();
        let mut r = IntMatrix::zeros(g, torsion.len());
        for (k, d) in torsion.iter().enumerate() {
            r.set(free_rank + k, k, d.clone());
        }
        Self::from_relations(r)
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn generators(&self) -> usize {
        self.relations.rows()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.smith
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of normal-form coordinates.
    pub fn normal_dim(&self) -> usize {
        self.selected.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of normal coordinate `k`: `0` for a free coordinate.
    pub fn modulus(&self, k: usize) -> BigInt {
        if k < self.free_rank {
            BigInt::zero()
        } else {
            self.torsion[k - self.free_rank].clone()
        }
    }

    pub fn moduli(&self) -> Vec<BigInt> {
        (0..self.normal_dim()).map(|k| self.modulus(k)).collect()
    }

    /// Reduces normal coordinates into canonical representatives.
    pub fn reduce(&self, x: &mut [BigInt]) {
        for (k, xk) in x.iter_mut().enumerate().skip(self.free_rank) {
            *xk = xk.mod_floor(&self.torsion[k - self.free_rank]);
        }
    }

    /// Normal-form coordinates of a presentation vector.
    pub fn to_normal(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = self.smith.u.mul_vec(x);
        let mut out: Vec<BigInt> = self.selected.iter().map(|&i| y[i].clone()).collect();
        self.reduce(&mut out);
        out
    }

    /// A presentation vector representing the given normal-form coordinates.
    pub fn from_normal(&self, c: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(c.len(), self.normal_dim(), "normal coordinate count");
        let mut y = vec![BigInt::zero(); self.generators()];
        for (k, &i) in self.selected.iter().enumerate() {
            y[i] = c[k].clone();
        }
        self.smith.u_inv.mul_vec(&y)
    }

    /// Matrix taking presentation vectors to (unreduced) normal coordinates.
    pub fn to_normal_matrix(&self) -> IntMatrix {
        self.smith.u.select_rows(&self.selected)
    }

    /// Matrix taking normal coordinates to presentation vectors.
    pub fn from_normal_matrix(&self) -> IntMatrix {
        self.smith.u_inv.select_cols(&self.selected)
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        self.to_normal(x).iter().all(Zero::is_zero)
    }

    /// Relation matrix of the normal form (diagonal moduli, free columns zero).
    pub fn normal_relations(&self) -> IntMatrix {
        let n = self.normal_dim();
        let mut r = IntMatrix::zeros(n, n);
        for k in self.free_rank..n {
            r.set(k, k, self.modulus(k));
        }
        r
    }

    /// Order of the group, when finite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({self})")
    }
}

impl Serialize for FgAbGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FgAbGroup", 3)?;
        st.serialize_field("rank", &self.free_rank)?;
        st.serialize_field("factors", &BigIntSeq(&self.torsion))?;
        st.serialize_field("display", &self.to_string())?;
        st.end()
    }
}

/// Isomorphism of finitely generated abelian groups: equal rank and invariant factors.
pub fn group_iso(g: &FgAbGroup, h: &FgAbGroup) -> bool {
    g.free_rank == h.free_rank && g.torsion == h.torsion
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomError {
    #[error("matrix has shape {rows}x{cols}, expected {exp_rows}x{exp_cols}")]
    Shape {
        rows: usize,
        cols: usize,
        exp_rows: usize,
        exp_cols: usize,
    },
    #[error("matrix does not carry source relations into target relations")]
    NotWellDefined,
}

/// A homomorphism given by an integer matrix on presentation coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: Arc<FgAbGroup>,
    target: Arc<FgAbGroup>,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Checks that every source relation lands in the target's relation lattice.
    pub fn new(
        source: Arc<FgAbGroup>,
        target: Arc<FgAbGroup>,
        matrix: IntMatrix,
    ) -> Result<Self, HomError> {
        if matrix.rows() != target.generators() || matrix.cols() != source.generators() {
            return Err(HomError::Shape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                exp_rows: target.generators(),
                exp_cols: source.generators(),
            });
        }
        let images = &matrix * source.relations();
        for j in 0..images.cols() {
            if !target.is_zero_element(&images.col(j)) {
                return Err(HomError::NotWellDefined);
            }
        }
        Ok(GroupHom {
            source,
            target,
            matrix,
        })
    }

    /// Builds a homomorphism from its matrix in normal-form coordinates.
    pub fn from_normal(
        source: Arc<FgAbGroup>,
        target: Arc<FgAbGroup>,
        normal: &IntMatrix,
    ) -> Result<Self, HomError> {
        if normal.rows() != target.normal_dim() || normal.cols() != source.normal_dim() {
            return Err(HomError::Shape {
                rows: normal.rows(),
                cols: normal.cols(),
                exp_rows: target.normal_dim(),
                exp_cols: source.normal_dim(),
            });
        }
        for k in source.free_rank()..source.normal_dim() {
            let image: Vec<BigInt> = normal.col(k).iter().map(|x| x * source.modulus(k)).collect();
            let mut reduced = image;
            target.reduce(&mut reduced);
            if reduced.iter().any(|x| !x.is_zero()) {
                return Err(HomError::NotWellDefined);
            }
        }
        let matrix = &(&target.from_normal_matrix() * normal) * &source.to_normal_matrix();
        GroupHom::new(source, target, matrix)
    }

    pub fn identity(g: Arc<FgAbGroup>) -> Self {
        let n = g.generators();
        GroupHom {
            source: g.clone(),
            target: g,
            matrix: IntMatrix::identity(n),
        }
    }

    pub fn zero(source: Arc<FgAbGroup>, target: Arc<FgAbGroup>) -> Self {
        let matrix = IntMatrix::zeros(target.generators(), source.generators());
        GroupHom {
            source,
            target,
            matrix,
        }
    }

    pub fn source(&self) -> &Arc<FgAbGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FgAbGroup> {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x)
    }

    /// Image of a normal-form element, in target normal form.
    pub fn apply_normal(&self, c: &[BigInt]) -> Vec<BigInt> {
        self.target.to_normal(&self.apply(&self.source.from_normal(c)))
    }

    /// Matrix in normal-form coordinates (torsion rows reduced).
    pub fn normal_matrix(&self) -> IntMatrix {
        let n = self.source.normal_dim();
        let cols: Vec<Vec<BigInt>> = (0..n)
            .map(|k| {
                let mut e = vec![BigInt::zero(); n];
                e[k] = BigInt::one();
                self.apply_normal(&e)
            })
            .collect();
        IntMatrix::from_columns(self.target.normal_dim(), &cols)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        assert!(
            *self.target == *other.source,
            "composition of non-composable homomorphisms"
        );
        GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: &other.matrix * &self.matrix,
        }
    }

    pub fn is_zero(&self) -> bool {
        (0..self.source.generators()).all(|j| self.target.is_zero_element(&self.matrix.col(j)))
    }

    /// Equality as maps (presentations may differ).
    pub fn agrees_with(&self, other: &GroupHom) -> bool {
        *self.source == *other.source
            && *self.target == *other.target
            && (0..self.source.generators()).all(|j| {
                let diff: Vec<BigInt> = self
                    .matrix
                    .col(j)
                    .iter()
                    .zip(other.matrix.col(j))
                    .map(|(a, b)| a - b)
                    .collect();
                self.target.is_zero_element(&diff)
            })
    }

    /// Generators (normal coordinates of the source) of the kernel.
    pub fn kernel_generators(&self) -> Vec<Vec<BigInt>> {
        let n = self.normal_matrix();
        let rt = self.target.normal_relations();
        let stacked = n.hstack(&rt.neg());
        let basis = smith_normal_form(&stacked).kernel_basis();
        let s = self.source.normal_dim();
        (0..basis.cols())
            .map(|j| {
                let mut x: Vec<BigInt> = basis.col(j)[..s].to_vec();
                self.source.reduce(&mut x);
                x
            })
            .filter(|x| x.iter().any(|c| !c.is_zero()))
            .collect()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_generators().is_empty()
    }

    pub fn is_surjective(&self) -> bool {
        let stacked = self.normal_matrix().hstack(&self.target.normal_relations());
        let s = smith_normal_form(&stacked);
        s.rank == self.target.normal_dim() && s.diagonal()[..s.rank].iter().all(One::is_one)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Whether a target element (normal coordinates) lies in the image.
    pub fn image_contains(&self, y: &[BigInt]) -> bool {
        self.preimage(y).is_some()
    }

    /// Some source element (normal coordinates) mapping to `y`, if any.
    pub fn preimage(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let stacked = self.normal_matrix().hstack(&self.target.normal_relations());
        let x = smith_normal_form(&stacked).solve(y)?;
        let mut out = x[..self.source.normal_dim()].to_vec();
        self.source.reduce(&mut out);
        Some(out)
    }
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupHom({} -> {}, {:?})",
            self.source, self.target, self.matrix
        )
    }
}

impl Serialize for GroupHom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GroupHom", 4)?;
        st.serialize_field("source", &*self.source)?;
        st.serialize_field("target", &*self.target)?;
        st.serialize_field("matrix", &self.matrix)?;
        st.serialize_field("normal_matrix", &self.normal_matrix())?;
        st.end()
    }
}

/// Exactness of `A --f--> B --g--> C` at `B`.
pub fn is_exact_at(f: &GroupHom, g: &GroupHom) -> bool {
    if !f.then(g).is_zero() {
        return false;
    }
    g.kernel_generators().iter().all(|x| f.image_contains(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cokernel_normal_forms() {
        let g = FgAbGroup::from_relations(IntMatrix::from_i64(&[&[3], &[1]]));
        assert_eq!((g.free_rank(), g.torsion().len()), (1, 0));
        let g = FgAbGroup::from_relations(IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(g.torsion(), &big(&[6])[..]);
        assert_eq!(g.to_string(), "Z_6");
        let z = FgAbGroup::from_relations(IntMatrix::zeros(1, 0));
        assert_eq!(z.to_string(), "Z");
    }

    #[test]
    fn group_iso_examples() {
        let z = FgAbGroup::free(1);
        assert!(group_iso(&z, &FgAbGroup::free(1)));
        let z6 = FgAbGroup::normal(0, &big(&[6]));
        let z2z3 = FgAbGroup::from_relations(IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert!(group_iso(&z6, &z2z3));
        assert!(!group_iso(&z, &FgAbGroup::normal(0, &big(&[3]))));
    }

    #[test]
    fn normal_coordinates_round_trip() {
        let g = FgAbGroup::from_relations(IntMatrix::from_i64(&[&[3, 0], &[1, 2], &[0, 2]]));
        for v in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [5, -3, 2]] {
            let x = big(&v);
            let c = g.to_normal(&x);
            assert_eq!(g.to_normal(&g.from_normal(&c)), c);
        }
    }

    #[test]
    fn hom_well_definedness() {
        let z3 = Arc::new(FgAbGroup::normal(0, &big(&[3])));
        let z = Arc::new(FgAbGroup::free(1));
        assert!(GroupHom::new(z3.clone(), z.clone(), IntMatrix::from_i64(&[&[1]])).is_err());
        let h = GroupHom::new(z.clone(), z3.clone(), IntMatrix::from_i64(&[&[1]])).unwrap();
        assert!(h.is_surjective() && !h.is_injective());
        assert_eq!(h.kernel_generators(), vec![big(&[3])]);
        let times3 = GroupHom::new(z.clone(), z.clone(), IntMatrix::from_i64(&[&[3]])).unwrap();
        assert!(is_exact_at(&times3, &h));
    }
}
