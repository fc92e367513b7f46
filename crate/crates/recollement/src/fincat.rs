//! Finite additive categories as data.
//!
//! A `FinAddCategory` is a skeleton: object labels, a hom basis for every
//! ordered pair, composition structure constants, and identity coordinates.
//! Objects of the additive closure are `FormalSum`s of skeleton objects and
//! morphisms between them are block arrays of hom coordinates.
//!
//! On top of the raw data live ideals (hom subspace systems closed under
//! composition), factor categories, additive functors given by tables,
//! natural transformations, and the linear solver `solve_morphism` used for
//! fill-ins, connecting maps and uniqueness checks throughout the crate.

use crate::fq::{subspace, FqMatrix};
use serde::{Deserialize, Serialize};

pub type Coords = Vec<u32>;

/// Finite multiset of skeleton object ids; order is meaningful for block
/// alignment.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormalSum(pub Vec<usize>);

impl FormalSum {
    pub fn zero() -> Self {
        FormalSum(vec![])
    }
    pub fn single(x: usize) -> Self {
        FormalSum(vec![x])
    }
    pub fn concat(&self, other: &FormalSum) -> FormalSum {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FormalSum(v)
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    /// Equal as multisets (ignoring order).
    pub fn same_multiset(&self, other: &FormalSum) -> bool {
        let mut a = self.0.clone();
        let mut b = other.0.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

impl std::fmt::Debug for FormalSum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "⊕{:?}", self.0)
    }
}

/// A morphism between formal sums: `blocks[i][j]` holds the coordinates of
/// the component `src[j] -> tgt[i]` in the skeleton hom basis.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub src: FormalSum,
    pub tgt: FormalSum,
    pub blocks: Vec<Vec<Coords>>,
}

impl std::fmt::Debug for Morphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Mor({:?} -> {:?}; {:?})", self.src, self.tgt, self.blocks)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CatError {
    #[error("category axiom violated: {0}")]
    Axiom(String),
    #[error("unknown object id {0}")]
    UnknownObject(usize),
    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, CatError>;

/// Skeleton of a finite additive category.
#[derive(Clone, Serialize, Deserialize)]
pub struct FinAddCategory {
    pub q: u32,
    pub labels: Vec<String>,
    /// hom_dims[x][y] = dim Hom(x, y)
    pub hom_dims: Vec<Vec<usize>>,
    /// comp[x][y][z]: rows indexed by (f: x->y, g: y->z) pairs (f major),
    /// entries = coordinates of "f then g" in Hom(x, z).
    comp: Vec<Vec<Vec<FqMatrix>>>,
    /// identity coordinates per object
    pub ids: Vec<Coords>,
}

impl std::fmt::Debug for FinAddCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FinAddCategory({} objects over F_{})", self.labels.len(), self.q)
    }
}

impl FinAddCategory {
    pub fn new(
        q: u32,
        labels: Vec<String>,
        hom_dims: Vec<Vec<usize>>,
        comp: Vec<Vec<Vec<FqMatrix>>>,
        ids: Vec<Coords>,
    ) -> FinAddCategory {
        FinAddCategory {
            q,
            labels,
            hom_dims,
            comp,
            ids,
        }
    }

    pub fn num_objects(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self, x: usize, y: usize) -> usize {
        self.hom_dims[x][y]
    }

    pub fn comp_table(&self, x: usize, y: usize, z: usize) -> FqMatrix {
        self.comp[x][y][z].clone()
    }

    /// An object is zero iff its identity is the zero morphism.
    pub fn is_zero_object(&self, x: usize) -> bool {
        self.ids[x].iter().all(|&v| v == 0)
    }

    /// Coordinates of "f then g" for f: x->y, g: y->z.
    pub fn comp_coords(&self, x: usize, y: usize, z: usize, f: &[u32], g: &[u32]) -> Coords {
        let (dxy, dyz, dxz) = (self.dim(x, y), self.dim(y, z), self.dim(x, z));
        debug_assert_eq!(f.len(), dxy);
        debug_assert_eq!(g.len(), dyz);
        let mut out = vec![0u32; dxz];
        if dxz == 0 {
            return out;
        }
        let table = &self.comp[x][y][z];
        let q = self.q as u64;
        for (a, &fa) in f.iter().enumerate() {
            if fa == 0 {
                continue;
            }
            for (b, &gb) in g.iter().enumerate() {
                if gb == 0 {
                    continue;
                }
                let s = (fa as u64 * gb as u64) % q;
                let row = a * dyz + b;
                for k in 0..dxz {
                    out[k] = ((out[k] as u64 + s * table.get(row, k) as u64) % q) as u32;
                }
            }
        }
        out
    }

    pub fn zero_mor(&self, src: &FormalSum, tgt: &FormalSum) -> Morphism {
        let blocks = tgt
            .0
            .iter()
            .map(|&t| src.0.iter().map(|&s| vec![0u32; self.dim(s, t)]).collect())
            .collect();
        Morphism {
            src: src.clone(),
            tgt: tgt.clone(),
            blocks,
        }
    }

    pub fn identity(&self, sum: &FormalSum) -> Morphism {
        let mut m = self.zero_mor(sum, sum);
        for (i, &x) in sum.0.iter().enumerate() {
            m.blocks[i][i] = self.ids[x].clone();
        }
        m
    }

    /// Basis morphism `k` of Hom(x, y) as a single-block morphism.
    pub fn basis_mor(&self, x: usize, y: usize, k: usize) -> Morphism {
        let mut m = self.zero_mor(&FormalSum::single(x), &FormalSum::single(y));
        m.blocks[0][0][k] = 1;
        m
    }

    /// Composition in diagrammatic order: f: A -> B, g: B -> C gives A -> C.
    pub fn then(&self, f: &Morphism, g: &Morphism) -> Morphism {
        assert_eq!(f.tgt, g.src, "composition mismatch");
        let mut out = self.zero_mor(&f.src, &g.tgt);
        for (i, &ti) in g.tgt.0.iter().enumerate() {
            for (j, &sj) in f.src.0.iter().enumerate() {
                let mut acc = vec![0u32; self.dim(sj, ti)];
                for (k, &mk) in f.tgt.0.iter().enumerate() {
                    let part = self.comp_coords(sj, mk, ti, &f.blocks[k][j], &g.blocks[i][k]);
                    for (a, v) in part.into_iter().enumerate() {
                        acc[a] = (acc[a] + v) % self.q;
                    }
                }
                out.blocks[i][j] = acc;
            }
        }
        out
    }

    pub fn add(&self, f: &Morphism, g: &Morphism) -> Morphism {
        assert_eq!(f.src, g.src);
        assert_eq!(f.tgt, g.tgt);
        let mut out = f.clone();
        for i in 0..out.blocks.len() {
            for j in 0..out.blocks[i].len() {
                for k in 0..out.blocks[i][j].len() {
                    out.blocks[i][j][k] = (out.blocks[i][j][k] + g.blocks[i][j][k]) % self.q;
                }
            }
        }
        out
    }

    pub fn neg(&self, f: &Morphism) -> Morphism {
        let mut out = f.clone();
        for row in &mut out.blocks {
            for blk in row {
                for v in blk {
                    *v = (self.q - *v) % self.q;
                }
            }
        }
        out
    }

    pub fn sub(&self, f: &Morphism, g: &Morphism) -> Morphism {
        self.add(f, &self.neg(g))
    }

    pub fn scale(&self, f: &Morphism, s: u32) -> Morphism {
        let s = s % self.q;
        let mut out = f.clone();
        for row in &mut out.blocks {
            for blk in row {
                for v in blk {
                    *v = ((*v as u64 * s as u64) % self.q as u64) as u32;
                }
            }
        }
        out
    }

    pub fn is_zero_mor(&self, f: &Morphism) -> bool {
        f.blocks.iter().all(|r| r.iter().all(|b| b.iter().all(|&v| v == 0)))
    }

    /// Total coordinate dimension of Hom(src, tgt).
    pub fn block_dim(&self, src: &FormalSum, tgt: &FormalSum) -> usize {
        tgt.0
            .iter()
            .map(|&t| src.0.iter().map(|&s| self.dim(s, t)).sum::<usize>())
            .sum()
    }

    pub fn flatten(&self, f: &Morphism) -> Coords {
        let mut out = Vec::with_capacity(self.block_dim(&f.src, &f.tgt));
        for row in &f.blocks {
            for blk in row {
                out.extend_from_slice(blk);
            }
        }
        out
    }

    pub fn unflatten(&self, src: &FormalSum, tgt: &FormalSum, flat: &[u32]) -> Morphism {
        let mut m = self.zero_mor(src, tgt);
        let mut pos = 0;
        for (i, &t) in tgt.0.iter().enumerate() {
            for (j, &s) in src.0.iter().enumerate() {
                let d = self.dim(s, t);
                m.blocks[i][j] = flat[pos..pos + d].to_vec();
                pos += d;
            }
        }
        assert_eq!(pos, flat.len());
        m
    }

    /// Builds the morphism with one off-diagonal assembly from parts:
    /// `from_blocks(rows of (tgt part, src part, mor))`. Utility for gluing.
    pub fn assemble(
        &self,
        src_parts: &[&Morphism],
    ) -> Morphism {
        // place given morphisms as diagonal blocks: src/tgt concatenated
        let src = src_parts
            .iter()
            .fold(FormalSum::zero(), |a, m| a.concat(&m.src));
        let tgt = src_parts
            .iter()
            .fold(FormalSum::zero(), |a, m| a.concat(&m.tgt));
        let mut out = self.zero_mor(&src, &tgt);
        let (mut r0, mut c0) = (0, 0);
        for m in src_parts {
            for (i, row) in m.blocks.iter().enumerate() {
                for (j, blk) in row.iter().enumerate() {
                    out.blocks[r0 + i][c0 + j] = blk.clone();
                }
            }
            r0 += m.tgt.len();
            c0 += m.src.len();
        }
        out
    }

    /// Two-sided inverse of f, if it exists.
    pub fn invert(&self, f: &Morphism) -> Option<Morphism> {
        let (sol, _) = solve_morphism(
            self,
            &f.tgt,
            &f.src,
            |g| {
                let mut v = self.flatten(&self.then(f, g));
                v.extend(self.flatten(&self.then(g, f)));
                v
            },
            &{
                let mut rhs = self.flatten(&self.identity(&f.src));
                rhs.extend(self.flatten(&self.identity(&f.tgt)));
                rhs
            },
        );
        sol
    }

    pub fn is_iso(&self, f: &Morphism) -> bool {
        self.invert(f).is_some()
    }

    /// Validation: bilinear associativity on all basis triples and two-sided
    /// unit laws. Returns the list of violations with their coordinates.
    pub fn validate(&self) -> Vec<String> {
        let n = self.num_objects();
        let mut bad = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for a in 0..self.dim(x, y) {
                    // identity laws on basis element a
                    let f: Coords = (0..self.dim(x, y)).map(|i| u32::from(i == a)).collect();
                    let l = self.comp_coords(x, x, y, &self.ids[x], &f);
                    if l != f {
                        bad.push(format!("id_{x} ; basis {a} of hom({x},{y}) differs"));
                    }
                    let r = self.comp_coords(x, y, y, &f, &self.ids[y]);
                    if r != f {
                        bad.push(format!("basis {a} of hom({x},{y}) ; id_{y} differs"));
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        for a in 0..self.dim(x, y) {
                            let fa: Coords =
                                (0..self.dim(x, y)).map(|i| u32::from(i == a)).collect();
                            for b in 0..self.dim(y, z) {
                                let fb: Coords =
                                    (0..self.dim(y, z)).map(|i| u32::from(i == b)).collect();
                                let ab = self.comp_coords(x, y, z, &fa, &fb);
                                for c in 0..self.dim(z, w) {
                                    let fc: Coords =
                                        (0..self.dim(z, w)).map(|i| u32::from(i == c)).collect();
                                    let bc = self.comp_coords(y, z, w, &fb, &fc);
                                    let lhs = self.comp_coords(x, z, w, &ab, &fc);
                                    let rhs = self.comp_coords(x, y, w, &fa, &bc);
                                    if lhs != rhs {
                                        bad.push(format!(
                                            "associativity fails at objects ({x},{y},{z},{w}), basis ({a},{b},{c})"
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        bad
    }
}

/// Solves a linear condition `eval(g) = rhs` for an unknown morphism
/// `g: src -> tgt`. `eval` must be linear; it is probed on basis vectors.
/// Returns (a particular solution if consistent, dimension of the space of
/// homogeneous solutions).
pub fn solve_morphism(
    cat: &FinAddCategory,
    src: &FormalSum,
    tgt: &FormalSum,
    eval: impl Fn(&Morphism) -> Coords,
    rhs: &[u32],
) -> (Option<Morphism>, usize) {
    let dim = cat.block_dim(src, tgt);
    let zero = cat.zero_mor(src, tgt);
    let base = eval(&zero);
    assert!(
        base.iter().all(|&v| v == 0),
        "solve_morphism: eval is not linear (nonzero at 0)"
    );
    let out_dim = base.len();
    assert_eq!(rhs.len(), out_dim);
    let mut rows = FqMatrix::zeros(cat.q, dim, out_dim);
    for k in 0..dim {
        let mut flat = vec![0u32; dim];
        flat[k] = 1;
        let ek = cat.unflatten(src, tgt, &flat);
        let img = eval(&ek);
        for (c, &v) in img.iter().enumerate() {
            rows.set(k, c, v);
        }
    }
    let rhs_m = FqMatrix::from_fn(cat.q, 1, out_dim, |_, c| rhs[c] as i64);
    let hom_dim = rows.left_kernel().rows();
    match rows.solve_left(&rhs_m) {
        Some(x) => {
            let flat: Coords = (0..dim).map(|i| x.get(0, i)).collect();
            (Some(cat.unflatten(src, tgt, &flat)), hom_dim)
        }
        None => (None, hom_dim),
    }
}

/// A hom-subspace system closed under composition with arbitrary morphisms.
/// `spaces[x][y]` has rows = flattened coordinates inside Hom(x, y), in
/// reduced echelon form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ideal {
    pub spaces: Vec<Vec<FqMatrix>>,
}

impl Ideal {
    pub fn zero(cat: &FinAddCategory) -> Ideal {
        let n = cat.num_objects();
        Ideal {
            spaces: (0..n)
                .map(|x| (0..n).map(|y| FqMatrix::zeros(cat.q, 0, cat.dim(x, y))).collect())
                .collect(),
        }
    }

    pub fn full(cat: &FinAddCategory) -> Ideal {
        let n = cat.num_objects();
        Ideal {
            spaces: (0..n)
                .map(|x| {
                    (0..n)
                        .map(|y| FqMatrix::identity(cat.q, cat.dim(x, y)))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn dim(&self, x: usize, y: usize) -> usize {
        self.spaces[x][y].rows()
    }

    pub fn contains_coords(&self, x: usize, y: usize, v: &[u32]) -> bool {
        if v.iter().all(|&c| c == 0) {
            return true;
        }
        let m = FqMatrix::from_fn(self.spaces[x][y].q(), 1, v.len(), |_, c| v[c] as i64);
        subspace::contains(&self.spaces[x][y], &m)
    }

    /// Does this ideal contain that one, pairwise?
    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        self.spaces.iter().zip(&other.spaces).all(|(row_s, row_o)| {
            row_s.iter().zip(row_o).all(|(s, o)| {
                (0..o.rows()).all(|r| {
                    let v = o.submatrix(&[r], &(0..o.cols()).collect::<Vec<_>>());
                    subspace::contains(s, &v)
                })
            })
        })
    }

    pub fn equal(&self, other: &Ideal) -> bool {
        self.contains_ideal(other) && other.contains_ideal(self)
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        Ideal {
            spaces: self
                .spaces
                .iter()
                .zip(&other.spaces)
                .map(|(rs, ro)| {
                    rs.iter()
                        .zip(ro)
                        .map(|(s, o)| subspace::sum(s, o))
                        .collect()
                })
                .collect(),
        }
    }

    /// The product ideal: spans of composites (element of self) then
    /// (element of other) through every middle object.
    pub fn product(&self, cat: &FinAddCategory, other: &Ideal) -> Ideal {
        let n = cat.num_objects();
        let mut spaces = Vec::with_capacity(n);
        for x in 0..n {
            let mut row = Vec::with_capacity(n);
            for z in 0..n {
                let mut acc = FqMatrix::zeros(cat.q, 0, cat.dim(x, z));
                for y in 0..n {
                    let a = &self.spaces[x][y];
                    let b = &other.spaces[y][z];
                    for i in 0..a.rows() {
                        for j in 0..b.rows() {
                            let c = cat.comp_coords(x, y, z, a.row(i), b.row(j));
                            let m = FqMatrix::from_fn(cat.q, 1, c.len(), |_, k| c[k] as i64);
                            acc = subspace::sum(&acc, &m);
                        }
                    }
                }
                row.push(acc);
            }
            spaces.push(row);
        }
        Ideal { spaces }
    }

    /// Closure check: composing ideal basis elements with arbitrary basis
    /// morphisms on either side stays inside the ideal.
    pub fn verify_closed(&self, cat: &FinAddCategory) -> Result<()> {
        let n = cat.num_objects();
        for x in 0..n {
            for y in 0..n {
                let s = &self.spaces[x][y];
                for r in 0..s.rows() {
                    let v = s.row(r);
                    for w in 0..n {
                        // postcompose with basis of hom(y, w)
                        for b in 0..cat.dim(y, w) {
                            let g: Coords = (0..cat.dim(y, w)).map(|i| u32::from(i == b)).collect();
                            let c = cat.comp_coords(x, y, w, v, &g);
                            if !self.contains_coords(x, w, &c) {
                                return Err(CatError::InvalidIdeal(format!(
                                    "not closed under postcomposition at ({x},{y})->{w}"
                                )));
                            }
                        }
                        // precompose with basis of hom(w, x)
                        for b in 0..cat.dim(w, x) {
                            let f: Coords = (0..cat.dim(w, x)).map(|i| u32::from(i == b)).collect();
                            let c = cat.comp_coords(w, x, y, &f, v);
                            if !self.contains_coords(w, y, &c) {
                                return Err(CatError::InvalidIdeal(format!(
                                    "not closed under precomposition at {w}->({x},{y})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The idempotent ideal of morphisms factoring through finite sums of the
/// given objects: spanned by all two-step composites through members of `s`.
pub fn ideal_from_objects(cat: &FinAddCategory, s: &[usize]) -> Result<Ideal> {
    let n = cat.num_objects();
    for &o in s {
        if o >= n {
            return Err(CatError::UnknownObject(o));
        }
    }
    let mut spaces = Vec::with_capacity(n);
    for x in 0..n {
        let mut row = Vec::with_capacity(n);
        for y in 0..n {
            let mut acc = FqMatrix::zeros(cat.q, 0, cat.dim(x, y));
            for &m in s {
                for a in 0..cat.dim(x, m) {
                    let fa: Coords = (0..cat.dim(x, m)).map(|i| u32::from(i == a)).collect();
                    for b in 0..cat.dim(m, y) {
                        let fb: Coords = (0..cat.dim(m, y)).map(|i| u32::from(i == b)).collect();
                        let c = cat.comp_coords(x, m, y, &fa, &fb);
                        let v = FqMatrix::from_fn(cat.q, 1, c.len(), |_, k| c[k] as i64);
                        acc = subspace::sum(&acc, &v);
                    }
                }
            }
            row.push(acc);
        }
        spaces.push(row);
    }
    let ideal = Ideal { spaces };
    ideal.verify_closed(cat)?;
    Ok(ideal)
}

/// True iff every composite of two ideal elements vanishes.
pub fn is_square_zero(cat: &FinAddCategory, ideal: &Ideal) -> bool {
    let prod = ideal.product(cat, ideal);
    prod.spaces
        .iter()
        .all(|row| row.iter().all(|s| s.rows() == 0))
}

/// An additive functor given by tables: the image of each skeleton object as
/// a formal sum of the codomain skeleton, plus a linear map on each hom
/// space into the block-coordinate space of morphisms between the images.
#[derive(Clone, Serialize, Deserialize)]
pub struct AdditiveFunctor {
    pub obj_map: Vec<FormalSum>,
    /// hom_map[x][y]: rows = dim Hom_dom(x,y), cols = block_dim(F x, F y)
    pub hom_map: Vec<Vec<FqMatrix>>,
}

impl std::fmt::Debug for AdditiveFunctor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AdditiveFunctor({} objects)", self.obj_map.len())
    }
}

impl AdditiveFunctor {
    pub fn identity(cat: &FinAddCategory) -> AdditiveFunctor {
        let n = cat.num_objects();
        AdditiveFunctor {
            obj_map: (0..n).map(FormalSum::single).collect(),
            hom_map: (0..n)
                .map(|x| (0..n).map(|y| FqMatrix::identity(cat.q, cat.dim(x, y))).collect())
                .collect(),
        }
    }

    pub fn apply_obj(&self, sum: &FormalSum) -> FormalSum {
        sum.0
            .iter()
            .fold(FormalSum::zero(), |a, &x| a.concat(&self.obj_map[x]))
    }

    pub fn apply_mor(&self, dom: &FinAddCategory, cod: &FinAddCategory, f: &Morphism) -> Morphism {
        let src = self.apply_obj(&f.src);
        let tgt = self.apply_obj(&f.tgt);
        let mut out = cod.zero_mor(&src, &tgt);
        // offsets of each original summand inside the image sums
        let src_off: Vec<usize> = f
            .src
            .0
            .iter()
            .scan(0, |acc, &x| {
                let v = *acc;
                *acc += self.obj_map[x].len();
                Some(v)
            })
            .collect();
        let tgt_off: Vec<usize> = f
            .tgt
            .0
            .iter()
            .scan(0, |acc, &x| {
                let v = *acc;
                *acc += self.obj_map[x].len();
                Some(v)
            })
            .collect();
        for (i, &t) in f.tgt.0.iter().enumerate() {
            for (j, &s) in f.src.0.iter().enumerate() {
                let v = &f.blocks[i][j];
                if v.iter().all(|&c| c == 0) {
                    continue;
                }
                let row = FqMatrix::from_fn(dom.q, 1, v.len(), |_, c| v[c] as i64);
                let img_flat = row.mul(&self.hom_map[s][t]);
                let flat: Coords = (0..img_flat.cols()).map(|c| img_flat.get(0, c)).collect();
                let img = cod.unflatten(&self.obj_map[s], &self.obj_map[t], &flat);
                for (bi, brow) in img.blocks.iter().enumerate() {
                    for (bj, blk) in brow.iter().enumerate() {
                        let dst = &mut out.blocks[tgt_off[i] + bi][src_off[j] + bj];
                        for (k, &c) in blk.iter().enumerate() {
                            dst[k] = (dst[k] + c) % cod.q;
                        }
                    }
                }
            }
        }
        out
    }

    /// Validates identity and composition preservation on all bases.
    pub fn validate(&self, dom: &FinAddCategory, cod: &FinAddCategory) -> Vec<String> {
        let mut bad = Vec::new();
        let n = dom.num_objects();
        for x in 0..n {
            let img = self.apply_mor(dom, cod, &dom.identity(&FormalSum::single(x)));
            if img != cod.identity(&self.obj_map[x]) {
                bad.push(format!("identity of object {x} not preserved"));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for a in 0..dom.dim(x, y) {
                        let fa = dom.basis_mor(x, y, a);
                        let fa_img = self.apply_mor(dom, cod, &fa);
                        for b in 0..dom.dim(y, z) {
                            let fb = dom.basis_mor(y, z, b);
                            let comp = dom.then(&fa, &fb);
                            let lhs = self.apply_mor(dom, cod, &comp);
                            let rhs = cod.then(&fa_img, &self.apply_mor(dom, cod, &fb));
                            if lhs != rhs {
                                bad.push(format!(
                                    "composition not preserved at ({x},{y},{z}) basis ({a},{b})"
                                ));
                            }
                        }
                    }
                }
            }
        }
        bad
    }
}

/// F then G (left to right).
pub fn compose_functors(
    dom: &FinAddCategory,
    mid: &FinAddCategory,
    cod: &FinAddCategory,
    f: &AdditiveFunctor,
    g: &AdditiveFunctor,
) -> AdditiveFunctor {
    let n = dom.num_objects();
    let obj_map: Vec<FormalSum> = (0..n).map(|x| g.apply_obj(&f.obj_map[x])).collect();
    let mut hom_map = Vec::with_capacity(n);
    for x in 0..n {
        let mut row = Vec::with_capacity(n);
        for y in 0..n {
            let d = dom.dim(x, y);
            let out_dim = cod.block_dim(&obj_map[x], &obj_map[y]);
            let mut m = FqMatrix::zeros(dom.q, d, out_dim);
            for k in 0..d {
                let img = g.apply_mor(mid, cod, &f.apply_mor(dom, mid, &dom.basis_mor(x, y, k)));
                let flat = cod.flatten(&img);
                for (c, &v) in flat.iter().enumerate() {
                    m.set(k, c, v);
                }
            }
            row.push(m);
        }
        hom_map.push(row);
    }
    AdditiveFunctor { obj_map, hom_map }
}

/// The kernel ideal of a functor: per-pair nullspaces of its hom maps.
pub fn functor_kernel_ideal(
    dom: &FinAddCategory,
    f: &AdditiveFunctor,
) -> Result<Ideal> {
    let n = dom.num_objects();
    let mut spaces = Vec::with_capacity(n);
    for x in 0..n {
        let mut row = Vec::with_capacity(n);
        for y in 0..n {
            row.push(f.hom_map[x][y].left_kernel());
        }
        spaces.push(row);
    }
    let ideal = Ideal { spaces };
    ideal.verify_closed(dom)?;
    Ok(ideal)
}

/// A factor category together with the projection functor and a linear lift
/// (a section of the projection on hom spaces).
#[derive(Clone, Debug)]
pub struct FactorData {
    pub cat: FinAddCategory,
    pub proj: AdditiveFunctor,
    /// lift[x][y]: rows = dim new hom, cols = dim old hom
    pub lift: Vec<Vec<FqMatrix>>,
}

/// Factor category by an ideal: hom spaces become quotient spaces on the
/// same objects; the projection's kernel ideal is the given ideal.
pub fn factor_category(cat: &FinAddCategory, ideal: &Ideal) -> Result<FactorData> {
    ideal.verify_closed(cat)?;
    let n = cat.num_objects();
    let q = cat.q;
    // per pair: quotient coordinates = complement of pivot columns
    let mut proj_maps = Vec::with_capacity(n);
    let mut lift_maps = Vec::with_capacity(n);
    let mut new_dims = Vec::with_capacity(n);
    for x in 0..n {
        let mut prow = Vec::with_capacity(n);
        let mut lrow = Vec::with_capacity(n);
        let mut drow = Vec::with_capacity(n);
        for y in 0..n {
            let d = cat.dim(x, y);
            let sub = &ideal.spaces[x][y];
            let e = sub.row_reduce();
            let pivots = e.pivots.clone();
            let free: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
            // projection: reduce a vector modulo sub, read free coordinates
            let mut proj = FqMatrix::zeros(q, d, free.len());
            for s in 0..d {
                let mut v = vec![0u32; d];
                v[s] = 1;
                for (pi, &pc) in pivots.iter().enumerate() {
                    let fct = v[pc];
                    if fct != 0 {
                        for c in 0..d {
                            let subv = (fct as u64 * e.rref.get(pi, c) as u64) % q as u64;
                            v[c] = ((v[c] as u64 + q as u64 - subv) % q as u64) as u32;
                        }
                    }
                }
                for (j, &fc) in free.iter().enumerate() {
                    proj.set(s, j, v[fc]);
                }
            }
            let lift = FqMatrix::from_fn(q, free.len(), d, |r, c| i64::from(free[r] == c));
            prow.push(proj);
            lrow.push(lift);
            drow.push(free.len());
        }
        proj_maps.push(prow);
        lift_maps.push(lrow);
        new_dims.push(drow);
    }
    // new composition tables: lift, compose, project
    let mut comp = Vec::with_capacity(n);
    for x in 0..n {
        let mut cx = Vec::with_capacity(n);
        for y in 0..n {
            let mut cxy = Vec::with_capacity(n);
            for z in 0..n {
                let (da, db, dc) = (new_dims[x][y], new_dims[y][z], new_dims[x][z]);
                let mut table = FqMatrix::zeros(q, da * db, dc);
                for a in 0..da {
                    let la: Coords = (0..cat.dim(x, y)).map(|c| lift_maps[x][y].get(a, c)).collect();
                    for b in 0..db {
                        let lb: Coords =
                            (0..cat.dim(y, z)).map(|c| lift_maps[y][z].get(b, c)).collect();
                        let comp_old = cat.comp_coords(x, y, z, &la, &lb);
                        let row = FqMatrix::from_fn(q, 1, comp_old.len(), |_, c| comp_old[c] as i64);
                        let projd = row.mul(&proj_maps[x][z]);
                        for c in 0..dc {
                            table.set(a * db + b, c, projd.get(0, c));
                        }
                    }
                }
                cxy.push(table);
            }
            cx.push(cxy);
        }
        comp.push(cx);
    }
    let ids: Vec<Coords> = (0..n)
        .map(|x| {
            let row = FqMatrix::from_fn(q, 1, cat.dim(x, x), |_, c| cat.ids[x][c] as i64);
            let p = row.mul(&proj_maps[x][x]);
            (0..p.cols()).map(|c| p.get(0, c)).collect()
        })
        .collect();
    let new_cat = FinAddCategory::new(
        q,
        cat.labels.clone(),
        new_dims,
        comp,
        ids,
    );
    let bad = new_cat.validate();
    if !bad.is_empty() {
        return Err(CatError::Axiom(format!("factor category invalid: {}", bad.join("; "))));
    }
    let proj = AdditiveFunctor {
        obj_map: (0..n).map(FormalSum::single).collect(),
        hom_map: proj_maps,
    };
    Ok(FactorData {
        cat: new_cat,
        proj,
        lift: lift_maps,
    })
}

/// Column morphism X -> A + B from X -> A and X -> B.
pub fn col2(cat: &FinAddCategory, top: &Morphism, bottom: &Morphism) -> Morphism {
    assert_eq!(top.src, bottom.src);
    let tgt = top.tgt.concat(&bottom.tgt);
    let mut out = cat.zero_mor(&top.src, &tgt);
    for (i, row) in top.blocks.iter().enumerate() {
        out.blocks[i] = row.clone();
    }
    for (i, row) in bottom.blocks.iter().enumerate() {
        out.blocks[top.tgt.len() + i] = row.clone();
    }
    out
}

/// Row morphism A + B -> Y from A -> Y and B -> Y.
pub fn row2(cat: &FinAddCategory, left: &Morphism, right: &Morphism) -> Morphism {
    assert_eq!(left.tgt, right.tgt);
    let src = left.src.concat(&right.src);
    let mut out = cat.zero_mor(&src, &left.tgt);
    for (i, row) in left.blocks.iter().enumerate() {
        for (j, blk) in row.iter().enumerate() {
            out.blocks[i][j] = blk.clone();
        }
        for (j, blk) in right.blocks[i].iter().enumerate() {
            out.blocks[i][left.src.len() + j] = blk.clone();
        }
    }
    out
}

/// Searches for an isomorphism between two formal sums. Fast path: equal
/// multisets give a permutation of identities. Otherwise enumerate the hom
/// space when it has at most 2^16 elements, then fall back to seeded random
/// trials before giving up.
pub fn find_iso(
    cat: &FinAddCategory,
    x: &FormalSum,
    y: &FormalSum,
    seed: u64,
) -> Option<Morphism> {
    use rand_core::{RngCore, SeedableRng};
    if x.same_multiset(y) {
        // permutation morphism via identities
        let mut m = cat.zero_mor(x, y);
        let mut used = vec![false; x.len()];
        for (i, &t) in y.0.iter().enumerate() {
            let j = x
                .0
                .iter()
                .enumerate()
                .position(|(j, &s)| s == t && !used[j])
                .expect("multiset matched");
            used[j] = true;
            m.blocks[i][j] = cat.ids[t].clone();
        }
        return Some(m);
    }
    let zero = cat.zero_mor(x, y);
    if cat.invert(&zero).is_some() {
        return Some(zero);
    }
    let d = cat.block_dim(x, y);
    if crate::modops::space_size(cat.q, d) <= crate::modops::ENUM_CAP {
        let mut found = None;
        crate::modops::enumerate_coeffs(cat.q, d, |flat| {
            let f = cat.unflatten(x, y, flat);
            if let Some(_inv) = cat.invert(&f) {
                found = Some(f);
                true
            } else {
                false
            }
        });
        return found;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..2048 {
        let flat: Coords = (0..d).map(|_| rng.next_u32() % cat.q).collect();
        let f = cat.unflatten(x, y, &flat);
        if cat.invert(&f).is_some() {
            return Some(f);
        }
    }
    None
}

/// A natural transformation between functors F, G: one component per
/// skeleton object of the domain.
#[derive(Clone, Debug)]
pub struct NatTransform {
    pub components: Vec<Morphism>,
}

impl NatTransform {
    /// Component at a formal sum: the block-diagonal assembly.
    pub fn at(&self, cod: &FinAddCategory, sum: &FormalSum) -> Morphism {
        let parts: Vec<&Morphism> = sum.0.iter().map(|&x| &self.components[x]).collect();
        if parts.is_empty() {
            return cod.zero_mor(&FormalSum::zero(), &FormalSum::zero());
        }
        cod.assemble(&parts)
    }

    /// Checks naturality against every basis morphism of the domain.
    pub fn verify_natural(
        &self,
        dom: &FinAddCategory,
        cod: &FinAddCategory,
        f: &AdditiveFunctor,
        g: &AdditiveFunctor,
    ) -> Vec<String> {
        let mut bad = Vec::new();
        let n = dom.num_objects();
        for x in 0..n {
            for y in 0..n {
                for k in 0..dom.dim(x, y) {
                    let b = dom.basis_mor(x, y, k);
                    let lhs = cod.then(&self.components[x], &g.apply_mor(dom, cod, &b));
                    let rhs = cod.then(&f.apply_mor(dom, cod, &b), &self.components[y]);
                    if lhs != rhs {
                        bad.push(format!("naturality fails at hom({x},{y}) basis {k}"));
                    }
                }
            }
        }
        bad
    }

    pub fn vcomp(&self, cod: &FinAddCategory, then: &NatTransform) -> NatTransform {
        NatTransform {
            components: self
                .components
                .iter()
                .zip(&then.components)
                .map(|(a, b)| cod.then(a, b))
                .collect(),
        }
    }

    /// Inverts every component.
    pub fn invert(&self, cod: &FinAddCategory) -> Option<NatTransform> {
        let mut comps = Vec::with_capacity(self.components.len());
        for c in &self.components {
            comps.push(cod.invert(c)?);
        }
        Some(NatTransform { components: comps })
    }
}

/// Report from `analyze_functor`.
#[derive(Clone, Debug)]
pub struct FunctorAnalysis {
    pub full_pairs: Vec<(usize, usize, bool)>,
    pub faithful_pairs: Vec<(usize, usize, bool)>,
    pub dense_witnesses: Vec<(FormalSum, Option<(FormalSum, Morphism)>)>,
    /// (pair, enumerated exhaustively?, reflects isomorphisms?)
    pub iso_reflection: Vec<(usize, usize, bool, bool)>,
    pub full: bool,
    pub faithful: bool,
    pub dense: bool,
    pub reflects_isos: bool,
}

/// Fullness/faithfulness by rank comparison per pair; denseness by searching
/// preimages for the given targets among formal sums of bounded size;
/// iso-reflection by exhaustive enumeration on hom spaces with at most 2^16
/// elements (larger pairs are reported as not exhaustively checked).
pub fn analyze_functor(
    dom: &FinAddCategory,
    cod: &FinAddCategory,
    f: &AdditiveFunctor,
    dense_targets: &[FormalSum],
    seed: u64,
) -> FunctorAnalysis {
    let n = dom.num_objects();
    let mut full_pairs = Vec::new();
    let mut faithful_pairs = Vec::new();
    let mut iso_reflection = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let m = &f.hom_map[x][y];
            let target_dim = cod.block_dim(&f.obj_map[x], &f.obj_map[y]);
            let rk = m.rank();
            full_pairs.push((x, y, rk == target_dim));
            faithful_pairs.push((x, y, rk == dom.dim(x, y)));
            // iso reflection on this pair
            let d = dom.dim(x, y);
            if crate::modops::space_size(dom.q, d) <= crate::modops::ENUM_CAP {
                let mut ok = true;
                crate::modops::enumerate_coeffs(dom.q, d, |flat| {
                    let g = dom.unflatten(&FormalSum::single(x), &FormalSum::single(y), flat);
                    let img = f.apply_mor(dom, cod, &g);
                    if cod.is_iso(&img) && !dom.is_iso(&g) {
                        ok = false;
                        true
                    } else {
                        false
                    }
                });
                iso_reflection.push((x, y, true, ok));
            } else {
                iso_reflection.push((x, y, false, true));
            }
        }
    }
    let mut dense_witnesses = Vec::new();
    for t in dense_targets {
        // try singles, then pairs of domain skeleton objects
        let mut witness = None;
        let mut candidates: Vec<FormalSum> = vec![FormalSum::zero()];
        for x in 0..n {
            candidates.push(FormalSum::single(x));
        }
        for x in 0..n {
            for y in x..n {
                candidates.push(FormalSum(vec![x, y]));
            }
        }
        for c in candidates {
            let img = f.apply_obj(&c);
            if let Some(iso) = find_iso(cod, &img, t, seed) {
                witness = Some((c, iso));
                break;
            }
        }
        dense_witnesses.push((t.clone(), witness));
    }
    let full = full_pairs.iter().all(|&(_, _, b)| b);
    let faithful = faithful_pairs.iter().all(|&(_, _, b)| b);
    let dense = dense_witnesses.iter().all(|(_, w)| w.is_some());
    let reflects = iso_reflection.iter().all(|&(_, _, _, ok)| ok);
    FunctorAnalysis {
        full_pairs,
        faithful_pairs,
        dense_witnesses,
        iso_reflection,
        full,
        faithful,
        dense,
        reflects_isos: reflects,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One object with End = F_q (the base field as a category).
    fn point_cat(q: u32) -> FinAddCategory {
        FinAddCategory::new(
            q,
            vec!["*".into()],
            vec![vec![1]],
            vec![vec![vec![FqMatrix::from_rows(q, &[vec![1]])]]],
            vec![vec![1]],
        )
    }

    /// Two objects: a point and a zero object.
    fn point_and_zero(q: u32) -> FinAddCategory {
        let comp = |dims: &Vec<Vec<usize>>| -> Vec<Vec<Vec<FqMatrix>>> {
            let n = dims.len();
            (0..n)
                .map(|x| {
                    (0..n)
                        .map(|y| {
                            (0..n)
                                .map(|z| FqMatrix::from_fn(q, dims[x][y] * dims[y][z], dims[x][z], |r, _| {
                                    // only the point-point-point table is nonzero
                                    i64::from(x == 0 && y == 0 && z == 0 && r == 0)
                                }))
                                .collect()
                        })
                        .collect()
                })
                .collect()
        };
        let dims = vec![vec![1, 0], vec![0, 0]];
        FinAddCategory::new(
            q,
            vec!["*".into(), "0".into()],
            dims.clone(),
            comp(&dims),
            vec![vec![1], vec![]],
        )
    }

    #[test]
    fn point_category_valid() {
        assert!(point_cat(5).validate().is_empty());
    }

    #[test]
    fn broken_associativity_detected() {
        // End(x) = F_2^2 spanned by id and a nilpotent e with a corrupted
        // table: e.e = id breaks associativity only if unit also breaks;
        // easier: corrupt e*e = e but (e*e)*e vs e*(e*e) mismatch needs a
        // genuinely non-associative table.
        let q = 2;
        // basis: 0 = id, 1 = e; set e*e = id (that's Z/2 group algebra,
        // associative) -- instead set e*e = e and keep unit laws; then
        // (e*e)*e = e*e = e and e*(e*e) = e*e = e: associative too. Use a
        // three-dim table that violates associativity: e*e = f, e*f = id,
        // f*e = 0, f*f = 0: (e*e)*e = f*e = 0, e*(e*e) = e*f = id: differs.
        let dims = vec![vec![3]];
        let mut table = FqMatrix::zeros(q, 9, 3);
        let idx = |a: usize, b: usize| a * 3 + b;
        // id compositions
        for a in 0..3 {
            table.set(idx(0, a), a, 1);
            if a != 0 {
                table.set(idx(a, 0), a, 1);
            }
        }
        // e*e = f, e*f = id, f*e = 0, f*f = 0
        table.set(idx(1, 1), 2, 1);
        table.set(idx(1, 2), 0, 1);
        let cat = FinAddCategory::new(q, vec!["x".into()], dims, vec![vec![vec![table]]], vec![vec![1, 0, 0]]);
        let bad = cat.validate();
        assert!(bad.iter().any(|s| s.contains("associativity")), "{bad:?}");
    }

    #[test]
    fn ideal_from_all_objects_is_full() {
        let cat = point_cat(3);
        let i = ideal_from_objects(&cat, &[0]).unwrap();
        assert!(i.equal(&Ideal::full(&cat)));
    }

    #[test]
    fn ideal_from_zero_object_is_zero() {
        let cat = point_and_zero(3);
        assert!(cat.validate().is_empty());
        let i = ideal_from_objects(&cat, &[1]).unwrap();
        assert!(i.equal(&Ideal::zero(&cat)));
    }

    #[test]
    fn factor_by_zero_and_full() {
        let cat = point_cat(3);
        let f0 = factor_category(&cat, &Ideal::zero(&cat)).unwrap();
        assert_eq!(f0.cat.dim(0, 0), 1);
        let f1 = factor_category(&cat, &Ideal::full(&cat)).unwrap();
        assert_eq!(f1.cat.dim(0, 0), 0);
        assert!(f1.cat.is_zero_object(0));
    }

    #[test]
    fn kernel_ideal_of_identity_and_zero() {
        let cat = point_cat(2);
        let idf = AdditiveFunctor::identity(&cat);
        let k = functor_kernel_ideal(&cat, &idf).unwrap();
        assert!(k.equal(&Ideal::zero(&cat)));
        // zero functor: send the object to the empty sum
        let zf = AdditiveFunctor {
            obj_map: vec![FormalSum::zero()],
            hom_map: vec![vec![FqMatrix::zeros(2, 1, 0)]],
        };
        let k2 = functor_kernel_ideal(&cat, &zf).unwrap();
        assert!(k2.equal(&Ideal::full(&cat)));
    }

    #[test]
    fn projection_kernel_is_the_ideal() {
        // factor the 3-dim End(x) = k[e]/(e^2) x k? use k[t]/t^2 as End:
        // basis id, e with e*e = 0: ideal = (e)
        let q = 3;
        let mut table = FqMatrix::zeros(q, 4, 2);
        let idx = |a: usize, b: usize| a * 2 + b;
        table.set(idx(0, 0), 0, 1);
        table.set(idx(0, 1), 1, 1);
        table.set(idx(1, 0), 1, 1);
        // e*e = 0
        let cat = FinAddCategory::new(q, vec!["x".into()], vec![vec![2]], vec![vec![vec![table]]], vec![vec![1, 0]]);
        assert!(cat.validate().is_empty());
        let mut ideal = Ideal::zero(&cat);
        ideal.spaces[0][0] = FqMatrix::from_rows(q, &[vec![0, 1]]);
        ideal.verify_closed(&cat).unwrap();
        let fd = factor_category(&cat, &ideal).unwrap();
        assert_eq!(fd.cat.dim(0, 0), 1);
        let k = functor_kernel_ideal(&cat, &fd.proj).unwrap();
        assert!(k.equal(&ideal));
        assert!(is_square_zero(&cat, &ideal));
    }

    #[test]
    fn find_iso_basics() {
        let cat = point_and_zero(3);
        let x = FormalSum::single(0);
        assert!(find_iso(&cat, &x, &x, 0).is_some());
        let z = FormalSum::zero();
        assert!(find_iso(&cat, &z, &x, 0).is_none());
        // zero object is isomorphic to the empty sum
        let zo = FormalSum::single(1);
        assert!(find_iso(&cat, &z, &zo, 0).is_some());
    }

    #[test]
    fn analyze_identity_is_epivalence() {
        let cat = point_cat(2);
        let idf = AdditiveFunctor::identity(&cat);
        let targets = vec![FormalSum::single(0), FormalSum(vec![0, 0])];
        let a = analyze_functor(&cat, &cat, &idf, &targets, 0);
        assert!(a.full && a.faithful && a.dense && a.reflects_isos);
    }

    #[test]
    fn functor_to_point_not_faithful() {
        let q = 2;
        // domain: End(x) = k[e]/(e^2); functor to the point kills e
        let mut table = FqMatrix::zeros(q, 4, 2);
        let idx = |a: usize, b: usize| a * 2 + b;
        table.set(idx(0, 0), 0, 1);
        table.set(idx(0, 1), 1, 1);
        table.set(idx(1, 0), 1, 1);
        let dom = FinAddCategory::new(q, vec!["x".into()], vec![vec![2]], vec![vec![vec![table]]], vec![vec![1, 0]]);
        let cod = point_cat(q);
        let f = AdditiveFunctor {
            obj_map: vec![FormalSum::single(0)],
            hom_map: vec![vec![FqMatrix::from_rows(q, &[vec![1], vec![0]])]],
        };
        assert!(f.validate(&dom, &cod).is_empty());
        let a = analyze_functor(&dom, &cod, &f, &[], 0);
        assert!(a.full && !a.faithful);
    }

    #[test]
    fn solve_morphism_identity() {
        let cat = point_cat(5);
        let x = FormalSum::single(0);
        // solve g with g = id (trivial probe)
        let id = cat.identity(&x);
        let (sol, hdim) = solve_morphism(&cat, &x, &x, |g| cat.flatten(g), &cat.flatten(&id));
        assert_eq!(sol.unwrap(), id);
        assert_eq!(hdim, 0);
    }
}
