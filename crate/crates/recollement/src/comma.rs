//! Comma categories along an additive functor, their trivial-morphism
//! ideals, the cone functor, and the cokernel functor into the module
//! category of the stable Auslander algebra.
//!
//! Objects of the downward comma category over F: A -> T are triples
//! (a, x; f) with f: F(a) -> x; upward objects are (x, a; g) with
//! g: x -> F(a). Both are stored uniformly as `CommaObj`. Hom spaces are
//! the solution spaces of the commuting-square constraint; the whole comma
//! window is itself a `FinAddCategory` with composition componentwise.

use crate::fincat::{
    factor_category, solve_morphism, AdditiveFunctor, FactorData, FinAddCategory, FormalSum,
    Ideal, Morphism,
};
use crate::fq::{subspace, FqMatrix};
use crate::modops;
use crate::recollement::Check;
use crate::stable::{Result, StableError, StablePkg};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CommaDir {
    /// objects (a, x; f) with f: F(a) -> x
    Down,
    /// objects (x, a; g) with g: x -> F(a)
    Up,
}

#[derive(Clone, Debug)]
pub struct CommaObj {
    pub a: FormalSum,
    pub x: FormalSum,
    /// Down: F(a) -> x. Up: x -> F(a).
    pub f: Morphism,
}

#[derive(Clone, Debug)]
pub struct CommaBounds {
    pub max_sum_len: usize,
    /// enumerate structure maps only when the hom space has at most this
    /// many elements
    pub enum_cap: u64,
}

impl Default for CommaBounds {
    fn default() -> Self {
        CommaBounds {
            max_sum_len: 2,
            enum_cap: 1 << 12,
        }
    }
}

pub struct CommaCat {
    pub dir: CommaDir,
    pub f_table: AdditiveFunctor,
    pub a_cat: FinAddCategory,
    pub t_cat: FinAddCategory,
    pub objects: Vec<CommaObj>,
    pub cat: FinAddCategory,
    /// hom basis per pair: (a-component, x-component)
    pub hom_basis: Vec<Vec<Vec<(Morphism, Morphism)>>>,
    pub truncated: bool,
}

/// All multisets of skeleton objects with size at most `len`, as
/// nondecreasing index sequences (including the empty sum).
fn enumerate_sums(n: usize, len: usize) -> Vec<FormalSum> {
    let mut out = vec![FormalSum::zero()];
    let mut cur: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for c in &cur {
            let lo = c.last().copied().unwrap_or(0);
            for i in lo..n {
                let mut v = c.clone();
                v.push(i);
                next.push(v);
            }
        }
        out.extend(next.iter().map(|v| FormalSum(v.clone())));
        cur = next;
    }
    out
}

impl CommaCat {
    /// The pair space of a hom between comma objects, as flattened
    /// coordinates (a-part then x-part).
    fn pair_dim(&self, o1: &CommaObj, o2: &CommaObj) -> (usize, usize) {
        (
            self.a_cat.block_dim(&o1.a, &o2.a),
            self.t_cat.block_dim(&o1.x, &o2.x),
        )
    }

    /// The commuting-square defect of a pair, linear in (a, b).
    fn square_defect(&self, o1: &CommaObj, o2: &CommaObj, a: &Morphism, b: &Morphism) -> Morphism {
        let fa = self.f_table.apply_mor(&self.a_cat, &self.t_cat, a);
        match self.dir {
            // f2 . F(a) = b . f1  <=>  F(a) then f2 - f1 then b = 0
            CommaDir::Down => self
                .t_cat
                .sub(&self.t_cat.then(&fa, &o2.f), &self.t_cat.then(&o1.f, b)),
            // G(a) . f1 = f2 . b  <=>  f1 then F(a) - b then f2 = 0
            CommaDir::Up => self
                .t_cat
                .sub(&self.t_cat.then(&o1.f, &fa), &self.t_cat.then(b, &o2.f)),
        }
    }

    fn solve_hom(&self, o1: &CommaObj, o2: &CommaObj) -> Vec<(Morphism, Morphism)> {
        let (da, db) = self.pair_dim(o1, o2);
        let q = self.cat_q();
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let mut basis_pairs = Vec::new();
        for k in 0..da + db {
            let mut fa = vec![0u32; da];
            let mut fb = vec![0u32; db];
            if k < da {
                fa[k] = 1;
            } else {
                fb[k - da] = 1;
            }
            let a = self.a_cat.unflatten(&o1.a, &o2.a, &fa);
            let b = self.t_cat.unflatten(&o1.x, &o2.x, &fb);
            let defect = self.square_defect(o1, o2, &a, &b);
            rows.push(
                self.t_cat
                    .flatten(&defect)
                    .iter()
                    .map(|&v| v as i64)
                    .collect(),
            );
            basis_pairs.push((a, b));
        }
        if da + db == 0 {
            return vec![];
        }
        let sys = FqMatrix::from_rows(q, &rows);
        let ker = sys.left_kernel();
        let mut out = Vec::with_capacity(ker.rows());
        for r in 0..ker.rows() {
            let coeffs = ker.row(r);
            let mut a = self.a_cat.zero_mor(&o1.a, &o2.a);
            let mut b = self.t_cat.zero_mor(&o1.x, &o2.x);
            for (k, &c) in coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let (pa, pb) = &basis_pairs[k];
                a = self.a_cat.add(&a, &self.a_cat.scale(pa, c));
                b = self.t_cat.add(&b, &self.t_cat.scale(pb, c));
            }
            out.push((a, b));
        }
        out
    }

    fn cat_q(&self) -> u32 {
        self.a_cat.q
    }

    /// Flattened pair coordinates of a morphism pair.
    pub fn flatten_pair(&self, o1: &CommaObj, o2: &CommaObj, a: &Morphism, b: &Morphism) -> Vec<u32> {
        let mut v = self.a_cat.flatten(a);
        v.extend(self.t_cat.flatten(b));
        let _ = (o1, o2);
        v
    }

    /// Extracts the component pair of a comma morphism given in hom-basis
    /// coordinates.
    pub fn components(&self, src: usize, tgt: usize, m: &Morphism) -> (Morphism, Morphism) {
        assert_eq!(m.src, FormalSum::single(src));
        assert_eq!(m.tgt, FormalSum::single(tgt));
        let o1 = &self.objects[src];
        let o2 = &self.objects[tgt];
        let mut a = self.a_cat.zero_mor(&o1.a, &o2.a);
        let mut b = self.t_cat.zero_mor(&o1.x, &o2.x);
        for (k, &c) in m.blocks[0][0].iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (pa, pb) = &self.hom_basis[src][tgt][k];
            a = self.a_cat.add(&a, &self.a_cat.scale(pa, c));
            b = self.t_cat.add(&b, &self.t_cat.scale(pb, c));
        }
        (a, b)
    }

    /// Expresses a component pair in the comma hom basis.
    pub fn coords_of_pair(
        &self,
        src: usize,
        tgt: usize,
        a: &Morphism,
        b: &Morphism,
    ) -> Option<Vec<u32>> {
        let o1 = &self.objects[src];
        let o2 = &self.objects[tgt];
        let basis = &self.hom_basis[src][tgt];
        let q = self.cat_q();
        let flat = self.flatten_pair(o1, o2, a, b);
        if basis.is_empty() {
            return flat.iter().all(|&v| v == 0).then(|| vec![]);
        }
        let bm = FqMatrix::from_rows(
            q,
            &basis
                .iter()
                .map(|(pa, pb)| {
                    self.flatten_pair(o1, o2, pa, pb)
                        .iter()
                        .map(|&v| v as i64)
                        .collect()
                })
                .collect::<Vec<_>>(),
        );
        let v = FqMatrix::from_fn(q, 1, flat.len(), |_, c| flat[c] as i64);
        let co = bm.solve_left(&v)?;
        Some((0..co.cols()).map(|c| co.get(0, c)).collect())
    }

    /// Builds a one-block morphism of the comma category from a pair.
    pub fn mor_from_pair(
        &self,
        src: usize,
        tgt: usize,
        a: &Morphism,
        b: &Morphism,
    ) -> Option<Morphism> {
        let coords = self.coords_of_pair(src, tgt, a, b)?;
        let mut m = self
            .cat
            .zero_mor(&FormalSum::single(src), &FormalSum::single(tgt));
        m.blocks[0][0] = coords;
        Some(m)
    }

    /// Finds the window object isomorphic to the given data, with the
    /// isomorphism (as a comma morphism). Linear search with a component
    /// multiset prefilter.
    pub fn locate(&self, obj: &CommaObj, seed: u64) -> Option<(usize, (Morphism, Morphism))> {
        for (i, cand) in self.objects.iter().enumerate() {
            if !cand.a.same_multiset(&obj.a) || !cand.x.same_multiset(&obj.x) {
                continue;
            }
            if let Some(iso) = comma_iso_between(self, obj, cand, seed) {
                return Some((i, iso));
            }
        }
        None
    }
}

/// Searches for an invertible comma morphism between two object data (not
/// necessarily window members).
pub fn comma_iso_between(
    cc: &CommaCat,
    o1: &CommaObj,
    o2: &CommaObj,
    seed: u64,
) -> Option<(Morphism, Morphism)> {
    // solve the hom space between the raw data, then look for a pair with
    // both components invertible
    let basis = solve_hom_raw(cc, o1, o2);
    if basis.is_empty() {
        let za = cc.a_cat.zero_mor(&o1.a, &o2.a);
        let zb = cc.t_cat.zero_mor(&o1.x, &o2.x);
        return (cc.a_cat.is_iso(&za) && cc.t_cat.is_iso(&zb)).then_some((za, zb));
    }
    let q = cc.a_cat.q;
    let try_pair = |coeffs: &[u32]| -> Option<(Morphism, Morphism)> {
        let mut a = cc.a_cat.zero_mor(&o1.a, &o2.a);
        let mut b = cc.t_cat.zero_mor(&o1.x, &o2.x);
        for (k, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            a = cc.a_cat.add(&a, &cc.a_cat.scale(&basis[k].0, c));
            b = cc.t_cat.add(&b, &cc.t_cat.scale(&basis[k].1, c));
        }
        (cc.a_cat.is_iso(&a) && cc.t_cat.is_iso(&b)).then_some((a, b))
    };
    if modops::space_size(q, basis.len()) <= modops::ENUM_CAP {
        let mut found = None;
        modops::enumerate_coeffs(q, basis.len(), |coeffs| {
            if let Some(p) = try_pair(coeffs) {
                found = Some(p);
                true
            } else {
                false
            }
        });
        found
    } else {
        use rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..2048 {
            let coeffs: Vec<u32> = (0..basis.len()).map(|_| rng.next_u32() % q).collect();
            if let Some(p) = try_pair(&coeffs) {
                return Some(p);
            }
        }
        None
    }
}

fn solve_hom_raw(cc: &CommaCat, o1: &CommaObj, o2: &CommaObj) -> Vec<(Morphism, Morphism)> {
    // same computation as CommaCat::solve_hom but on arbitrary object data
    let tmp = CommaObjPairSolver {
        cc,
    };
    tmp.solve(o1, o2)
}

struct CommaObjPairSolver<'a> {
    cc: &'a CommaCat,
}

impl CommaObjPairSolver<'_> {
    fn solve(&self, o1: &CommaObj, o2: &CommaObj) -> Vec<(Morphism, Morphism)> {
        self.cc.solve_hom(o1, o2)
    }
}

/// All invertible endomorphisms of a formal sum, enumerated when the
/// endomorphism space is small enough; `None` when it is too large.
pub fn automorphisms(cat: &FinAddCategory, sum: &FormalSum, cap: u64) -> Option<Vec<Morphism>> {
    let d = cat.block_dim(sum, sum);
    if modops::space_size(cat.q, d) > cap {
        return None;
    }
    let mut out = Vec::new();
    let id = cat.identity(sum);
    if cat.invert(&id).is_some() {
        out.push(id);
    }
    modops::enumerate_coeffs(cat.q, d, |flat| {
        let m = cat.unflatten(sum, sum, flat);
        if cat.invert(&m).is_some() {
            out.push(m);
        }
        false
    });
    Some(out)
}

/// Sorts a formal sum nondecreasingly and returns the permutation morphism
/// from the sorted sum to the original.
fn sort_sum(cat: &FinAddCategory, sum: &FormalSum) -> (FormalSum, Morphism) {
    let mut idx: Vec<usize> = (0..sum.len()).collect();
    idx.sort_by_key(|&i| sum.0[i]);
    let sorted = FormalSum(idx.iter().map(|&i| sum.0[i]).collect());
    let mut perm = cat.zero_mor(&sorted, sum);
    for (new_pos, &old_pos) in idx.iter().enumerate() {
        perm.blocks[old_pos][new_pos] = cat.ids[sum.0[old_pos]].clone();
    }
    (sorted, perm)
}

/// Canonical representative of a comma object up to isomorphism: sums
/// sorted, structure map minimized over the automorphism orbit. `None` when
/// an automorphism group is too large to enumerate.
pub struct Canonicalizer {
    aut_cache_a: std::collections::HashMap<FormalSum, Option<std::rc::Rc<Vec<Morphism>>>>,
    aut_cache_x: std::collections::HashMap<FormalSum, Option<std::rc::Rc<Vec<Morphism>>>>,
    cap: u64,
}

impl Canonicalizer {
    pub fn new(cap: u64) -> Canonicalizer {
        Canonicalizer {
            aut_cache_a: std::collections::HashMap::new(),
            aut_cache_x: std::collections::HashMap::new(),
            cap,
        }
    }

    fn auts(
        &mut self,
        which_a: bool,
        cat: &FinAddCategory,
        sum: &FormalSum,
    ) -> Option<std::rc::Rc<Vec<Morphism>>> {
        let cache = if which_a {
            &mut self.aut_cache_a
        } else {
            &mut self.aut_cache_x
        };
        if let Some(hit) = cache.get(sum) {
            return hit.clone();
        }
        let v = automorphisms(cat, sum, self.cap).map(std::rc::Rc::new);
        cache.insert(sum.clone(), v.clone());
        v
    }

    /// (sorted a, sorted x, orbit-minimal flattened structure map), or None
    /// when canonicalization is infeasible.
    pub fn key(&mut self, cc: &CommaCat, obj: &CommaObj) -> Option<(Vec<usize>, Vec<usize>, Vec<u32>)> {
        let (a_s, pa) = sort_sum(&cc.a_cat, &obj.a);
        let (x_s, px) = sort_sum(&cc.t_cat, &obj.x);
        let fa_perm = cc.f_table.apply_mor(&cc.a_cat, &cc.t_cat, &pa);
        let px_inv = cc.t_cat.invert(&px)?;
        // structure map in sorted coordinates
        let f_s = match cc.dir {
            CommaDir::Down => cc
                .t_cat
                .then(&fa_perm, &cc.t_cat.then(&obj.f, &px_inv)),
            CommaDir::Up => cc.t_cat.then(
                &px,
                &cc.t_cat.then(&obj.f, &cc.t_cat.invert(&fa_perm)?),
            ),
        };
        let auts_a = self.auts(true, &cc.a_cat, &a_s)?;
        let auts_x = self.auts(false, &cc.t_cat, &x_s)?;
        let mut best: Option<Vec<u32>> = None;
        for aa in auts_a.iter() {
            let faa = cc.f_table.apply_mor(&cc.a_cat, &cc.t_cat, aa);
            for bb in auts_x.iter() {
                let cand = match cc.dir {
                    CommaDir::Down => cc.t_cat.then(&faa, &cc.t_cat.then(&f_s, bb)),
                    CommaDir::Up => cc.t_cat.then(bb, &cc.t_cat.then(&f_s, &faa)),
                };
                let flat = cc.t_cat.flatten(&cand);
                if best.as_ref().is_none_or(|b| flat < *b) {
                    best = Some(flat);
                }
            }
        }
        Some((a_s.0, x_s.0, best?))
    }
}

/// Builds a comma category window: all structure maps between bounded formal
/// sums, deduplicated up to isomorphism.
pub fn build_comma(
    dir: CommaDir,
    a_cat: &FinAddCategory,
    t_cat: &FinAddCategory,
    f_table: &AdditiveFunctor,
    bounds: &CommaBounds,
    seed: u64,
) -> Result<CommaCat> {
    let mut cc = CommaCat {
        dir,
        f_table: f_table.clone(),
        a_cat: a_cat.clone(),
        t_cat: t_cat.clone(),
        objects: vec![],
        cat: FinAddCategory::new(a_cat.q, vec![], vec![], vec![], vec![]),
        hom_basis: vec![],
        truncated: false,
    };
    let a_sums = enumerate_sums(a_cat.num_objects(), bounds.max_sum_len);
    let x_sums = enumerate_sums(t_cat.num_objects(), bounds.max_sum_len);
    let mut objs: Vec<CommaObj> = Vec::new();
    let mut canon = Canonicalizer::new(1 << 10);
    let mut keys = std::collections::HashSet::new();
    for a in &a_sums {
        let fa = f_table.apply_obj(a);
        for x in &x_sums {
            let d = match dir {
                CommaDir::Down => t_cat.block_dim(&fa, x),
                CommaDir::Up => t_cat.block_dim(x, &fa),
            };
            if modops::space_size(a_cat.q, d) > bounds.enum_cap {
                cc.truncated = true;
                continue;
            }
            let mk = |flat: &[u32]| -> CommaObj {
                let f = match dir {
                    CommaDir::Down => t_cat.unflatten(&fa, x, flat),
                    CommaDir::Up => t_cat.unflatten(x, &fa, flat),
                };
                CommaObj {
                    a: a.clone(),
                    x: x.clone(),
                    f,
                }
            };
            let zero = mk(&vec![0u32; d]);
            for cand in std::iter::once(zero).chain({
                let mut more = Vec::new();
                modops::enumerate_coeffs(a_cat.q, d, |flat| {
                    more.push(mk(flat));
                    false
                });
                more
            }) {
                push_dedup(&cc, &mut canon, &mut keys, &mut objs, cand, seed);
            }
        }
    }
    cc.objects = objs;
    assemble_comma(&mut cc)?;
    Ok(cc)
}

/// Adds an object unless an isomorphic one is present: canonical-key lookup
/// when feasible, pairwise isomorphism search otherwise.
fn push_dedup(
    cc: &CommaCat,
    canon: &mut Canonicalizer,
    keys: &mut std::collections::HashSet<(Vec<usize>, Vec<usize>, Vec<u32>)>,
    objs: &mut Vec<CommaObj>,
    cand: CommaObj,
    seed: u64,
) {
    match canon.key(cc, &cand) {
        Some(k) => {
            if keys.insert(k) {
                objs.push(cand);
            }
        }
        None => {
            let dup = objs.iter().any(|o| {
                o.a.same_multiset(&cand.a)
                    && o.x.same_multiset(&cand.x)
                    && comma_iso_between(cc, &cand, o, seed).is_some()
            });
            if !dup {
                objs.push(cand);
            }
        }
    }
}

/// Rebuilds a comma window with extra objects adjoined (deduplicated).
pub fn extend_comma(cc: &CommaCat, extras: &[CommaObj], seed: u64) -> Result<CommaCat> {
    let mut out = CommaCat {
        dir: cc.dir,
        f_table: cc.f_table.clone(),
        a_cat: cc.a_cat.clone(),
        t_cat: cc.t_cat.clone(),
        objects: cc.objects.clone(),
        cat: FinAddCategory::new(cc.a_cat.q, vec![], vec![], vec![], vec![]),
        hom_basis: vec![],
        truncated: cc.truncated,
    };
    let mut canon = Canonicalizer::new(1 << 10);
    let mut keys = std::collections::HashSet::new();
    let mut deduped: Vec<CommaObj> = Vec::new();
    let existing = std::mem::take(&mut out.objects);
    for cand in existing.into_iter().chain(extras.iter().cloned()) {
        push_dedup(&out, &mut canon, &mut keys, &mut deduped, cand, seed);
    }
    out.objects = deduped;
    assemble_comma(&mut out)?;
    Ok(out)
}

fn assemble_comma(cc: &mut CommaCat) -> Result<()> {
    let n = cc.objects.len();
    let mut hom_basis = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(cc.solve_hom(&cc.objects[i].clone(), &cc.objects[j].clone()));
        }
        hom_basis.push(row);
    }
    let q = cc.a_cat.q;
    let dims: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|j| hom_basis[i][j].len()).collect())
        .collect();
    let mut comp = Vec::with_capacity(n);
    cc.hom_basis = hom_basis;
    for i in 0..n {
        let mut ci = Vec::with_capacity(n);
        for j in 0..n {
            let mut cij = Vec::with_capacity(n);
            for k in 0..n {
                let (da, db, dc) = (dims[i][j], dims[j][k], dims[i][k]);
                let mut table = FqMatrix::zeros(q, da * db, dc);
                for x in 0..da {
                    for y in 0..db {
                        let (a1, b1) = &cc.hom_basis[i][j][x];
                        let (a2, b2) = &cc.hom_basis[j][k][y];
                        let a = cc.a_cat.then(a1, a2);
                        let b = cc.t_cat.then(b1, b2);
                        let coords = cc
                            .coords_of_pair(i, k, &a, &b)
                            .ok_or_else(|| {
                                StableError::Other("comma composite outside hom span".into())
                            })?;
                        for (c, &v) in coords.iter().enumerate() {
                            table.set(x * db + y, c, v);
                        }
                    }
                }
                cij.push(table);
            }
            ci.push(cij);
        }
        comp.push(ci);
    }
    let ids: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let o = &cc.objects[i];
            let a = cc.a_cat.identity(&o.a);
            let b = cc.t_cat.identity(&o.x);
            cc.coords_of_pair(i, i, &a, &b).expect("identity pair")
        })
        .collect();
    let labels: Vec<String> = cc
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| format!("C{i}({:?},{:?})", o.a.0, o.x.0))
        .collect();
    cc.cat = FinAddCategory::new(q, labels, dims, comp, ids);
    let bad = cc.cat.validate();
    if !bad.is_empty() {
        return Err(StableError::Other(format!(
            "comma category invalid: {}",
            bad.join("; ")
        )));
    }
    Ok(())
}

/// The right-trivial ideal of a downward comma category: morphisms (0, b)
/// with b factoring through the target structure map.
pub fn rt_ideal(cc: &CommaCat) -> Result<Ideal> {
    assert_eq!(cc.dir, CommaDir::Down);
    trivial_ideal(cc, true)
}

/// The left-trivial ideal of an upward comma category: morphisms (0, c)
/// with c factoring through the source structure map.
pub fn lt_ideal(cc: &CommaCat) -> Result<Ideal> {
    assert_eq!(cc.dir, CommaDir::Up);
    trivial_ideal(cc, false)
}

fn trivial_ideal(cc: &CommaCat, right: bool) -> Result<Ideal> {
    let n = cc.objects.len();
    let q = cc.cat_q();
    let mut spaces = Vec::with_capacity(n);
    for i in 0..n {
        let o1 = &cc.objects[i];
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let o2 = &cc.objects[j];
            let hom_dim = cc.cat.dim(i, j);
            // ambient space: pair coordinates; trivial subspace candidates
            let tdim = cc.a_cat.block_dim(&o1.a, &o2.a) + cc.t_cat.block_dim(&o1.x, &o2.x);
            let mut tr_rows: Vec<Vec<i64>> = Vec::new();
            if right {
                // b = s then f2 for s: x1 -> F(a2)
                let fa2 = cc.f_table.apply_obj(&o2.a);
                let sd = cc.t_cat.block_dim(&o1.x, &fa2);
                for k in 0..sd {
                    let mut flat = vec![0u32; sd];
                    flat[k] = 1;
                    let s = cc.t_cat.unflatten(&o1.x, &fa2, &flat);
                    let b = cc.t_cat.then(&s, &o2.f);
                    let a = cc.a_cat.zero_mor(&o1.a, &o2.a);
                    tr_rows.push(
                        cc.flatten_pair(o1, o2, &a, &b)
                            .iter()
                            .map(|&v| v as i64)
                            .collect(),
                    );
                }
            } else {
                // c = f1 then h for h: F(a1) -> x2
                let fa1 = cc.f_table.apply_obj(&o1.a);
                let sd = cc.t_cat.block_dim(&fa1, &o2.x);
                for k in 0..sd {
                    let mut flat = vec![0u32; sd];
                    flat[k] = 1;
                    let h = cc.t_cat.unflatten(&fa1, &o2.x, &flat);
                    let c = cc.t_cat.then(&o1.f, &h);
                    let a = cc.a_cat.zero_mor(&o1.a, &o2.a);
                    tr_rows.push(
                        cc.flatten_pair(o1, o2, &a, &c)
                            .iter()
                            .map(|&v| v as i64)
                            .collect(),
                    );
                }
            }
            let trivial = if tr_rows.is_empty() {
                FqMatrix::zeros(q, 0, tdim)
            } else {
                FqMatrix::from_rows(q, &tr_rows).row_space()
            };
            // intersect with the hom space and express in hom coordinates
            let hom_rows = if hom_dim == 0 {
                FqMatrix::zeros(q, 0, tdim)
            } else {
                FqMatrix::from_rows(
                    q,
                    &(0..hom_dim)
                        .map(|k| {
                            let (a, b) = &cc.hom_basis[i][j][k];
                            cc.flatten_pair(o1, o2, a, b)
                                .iter()
                                .map(|&v| v as i64)
                                .collect()
                        })
                        .collect::<Vec<_>>(),
                )
            };
            let inter = subspace::intersection(&hom_rows, &trivial);
            let mut coords_rows: Vec<Vec<i64>> = Vec::new();
            for r in 0..inter.rows() {
                let v = inter.submatrix(&[r], &(0..tdim).collect::<Vec<_>>());
                let co = hom_rows.solve_left(&v).expect("intersection inside hom");
                coords_rows.push((0..hom_dim).map(|c| co.get(0, c) as i64).collect());
            }
            let space = if coords_rows.is_empty() {
                FqMatrix::zeros(q, 0, hom_dim)
            } else {
                FqMatrix::from_rows(q, &coords_rows).row_space()
            };
            row.push(space);
        }
        spaces.push(row);
    }
    let ideal = Ideal { spaces };
    ideal.verify_closed(&cc.cat).map_err(StableError::Cat)?;
    Ok(ideal)
}

/// The ideal of morphisms (a, b) in a morphism category whose composite
/// condition f1 . h . f2-shape is solvable: a factors through the structure
/// maps up to a homotopy h.
pub fn hpt_ideal(cc: &CommaCat) -> Result<Ideal> {
    assert_eq!(cc.dir, CommaDir::Down);
    let n = cc.objects.len();
    let q = cc.cat_q();
    let mut spaces = Vec::with_capacity(n);
    for i in 0..n {
        let o1 = &cc.objects[i];
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let o2 = &cc.objects[j];
            let hom_dim = cc.cat.dim(i, j);
            if hom_dim == 0 {
                row.push(FqMatrix::zeros(q, 0, 0));
                continue;
            }
            // image subspace W = { f1 then h then f2 : h }
            let fa2 = cc.f_table.apply_obj(&o2.a);
            let hd = cc.t_cat.block_dim(&o1.x, &fa2);
            let out_dim = cc.t_cat.block_dim(&cc.f_table.apply_obj(&o1.a), &o2.x);
            let mut w_rows: Vec<Vec<i64>> = Vec::new();
            for k in 0..hd {
                let mut flat = vec![0u32; hd];
                flat[k] = 1;
                let h = cc.t_cat.unflatten(&o1.x, &fa2, &flat);
                let w = cc
                    .t_cat
                    .then(&o1.f, &cc.t_cat.then(&h, &o2.f));
                w_rows.push(cc.t_cat.flatten(&w).iter().map(|&v| v as i64).collect());
            }
            let w = if w_rows.is_empty() {
                FqMatrix::zeros(q, 0, out_dim)
            } else {
                FqMatrix::from_rows(q, &w_rows).row_space()
            };
            // basis morphism k maps to flatten(F(a_k) then f2); member iff
            // image lies in W
            let mut m = FqMatrix::zeros(q, hom_dim, out_dim);
            for k in 0..hom_dim {
                let (a, _) = &cc.hom_basis[i][j][k];
                let fa = cc.f_table.apply_mor(&cc.a_cat, &cc.t_cat, a);
                let img = cc.t_cat.then(&fa, &o2.f);
                for (c, &v) in cc.t_cat.flatten(&img).iter().enumerate() {
                    m.set(k, c, v);
                }
            }
            // reduce rows of m modulo W, then take the left kernel
            let reduced = reduce_rows_mod(&m, &w);
            row.push(reduced.left_kernel());
        }
        spaces.push(row);
    }
    let ideal = Ideal { spaces };
    ideal.verify_closed(&cc.cat).map_err(StableError::Cat)?;
    Ok(ideal)
}

fn reduce_rows_mod(m: &FqMatrix, w: &FqMatrix) -> FqMatrix {
    let q = m.q();
    let e = w.row_reduce();
    let mut out = m.clone();
    for r in 0..out.rows() {
        for (pi, &pc) in e.pivots.iter().enumerate() {
            let f = out.get(r, pc);
            if f != 0 {
                for c in 0..out.cols() {
                    let sub = (f as u64 * e.rref.get(pi, c) as u64) % q as u64;
                    let v = (out.get(r, c) as u64 + q as u64 - sub) % q as u64;
                    out.set(r, c, v as u32);
                }
            }
        }
    }
    out
}

/// The cone functor from an upward comma window modulo left-trivial
/// morphisms to a downward comma window modulo right-trivial morphisms,
/// over the same functor. Returns the functor between the factor
/// categories together with the factor data and correctness checks.
pub struct ConeFunctorData {
    pub up_factor: FactorData,
    pub down_factor: FactorData,
    pub functor: AdditiveFunctor,
    pub checks: Vec<Check>,
}

pub fn cone_functor(
    t_pkg: &StablePkg,
    up: &CommaCat,
    down: &CommaCat,
    seed: u64,
) -> Result<ConeFunctorData> {
    assert_eq!(up.dir, CommaDir::Up);
    assert_eq!(down.dir, CommaDir::Down);
    let lt = lt_ideal(up)?;
    let rt = rt_ideal(down)?;
    let up_factor = factor_category(&up.cat, &lt).map_err(StableError::Cat)?;
    let down_factor = factor_category(&down.cat, &rt).map_err(StableError::Cat)?;
    // object map: complete g: x -> F(a) to a triangle, land in the down window
    let n = up.objects.len();
    let mut obj_map = Vec::with_capacity(n);
    let mut cone_data = Vec::with_capacity(n);
    let mut checks = Vec::new();
    let mut ok_obj = true;
    let mut detail = String::new();
    for o in &up.objects {
        let tri = t_pkg.cone_triangle(&o.f)?;
        // the cone object as a downward comma object (a, C; g_c)
        let cobj = CommaObj {
            a: o.a.clone(),
            x: tri.z.clone(),
            f: tri.g.clone(),
        };
        match down.locate(&cobj, seed) {
            Some((idx, iso)) => {
                obj_map.push(FormalSum::single(idx));
                cone_data.push((tri, cobj, idx, iso));
            }
            None => {
                ok_obj = false;
                detail = format!("cone object not found in downward window: {:?}", cobj);
                obj_map.push(FormalSum::zero());
                cone_data.push((
                    tri,
                    cobj,
                    usize::MAX,
                    (
                        up.a_cat.zero_mor(&FormalSum::zero(), &FormalSum::zero()),
                        t_pkg.cat.zero_mor(&FormalSum::zero(), &FormalSum::zero()),
                    ),
                ));
            }
        }
    }
    checks.push(Check::new(
        "cone objects land in the downward window",
        "cone completion of upward comma objects",
        ok_obj,
        detail.clone(),
    ));
    if !ok_obj {
        return Err(StableError::Closure(detail));
    }
    // morphism map: fill in the middle map by the triangle axioms, well
    // defined modulo right-trivial morphisms
    let mut hom_map = Vec::with_capacity(n);
    for s in 0..n {
        let mut rowm = Vec::with_capacity(n);
        for t in 0..n {
            let d = up.cat.dim(s, t);
            let (tri_s, _, idx_s, iso_s) = &cone_data[s];
            let (tri_t, _, idx_t, iso_t) = &cone_data[t];
            let out_dim = down_factor.cat.dim(*idx_s, *idx_t);
            let mut m = FqMatrix::zeros(up.cat.q, d, out_dim);
            for k in 0..d {
                let mb = up.cat.basis_mor(s, t, k);
                let (a, c) = up.components(s, t, &mb);
                // fill-in b: C_s -> C_t with g_s then b = F(a) then g_t and
                // b then h_t = h_s then Sigma(c)
                let fa = up.f_table.apply_mor(&up.a_cat, &t_pkg.cat, &a);
                let rhs1 = t_pkg.cat.then(&fa, &tri_t.g);
                let sc = t_pkg.sigma.apply_mor(&t_pkg.cat, &t_pkg.cat, &c);
                let rhs2 = t_pkg.cat.then(&tri_s.h, &sc);
                let mut rhs = t_pkg.cat.flatten(&rhs1);
                rhs.extend(t_pkg.cat.flatten(&rhs2));
                let (b, _) = solve_morphism(
                    &t_pkg.cat,
                    &tri_s.z,
                    &tri_t.z,
                    |cand| {
                        let mut v = t_pkg.cat.flatten(&t_pkg.cat.then(&tri_s.g, cand));
                        v.extend(t_pkg.cat.flatten(&t_pkg.cat.then(cand, &tri_t.h)));
                        v
                    },
                    &rhs,
                );
                let b = b.ok_or_else(|| StableError::Other("cone fill-in failed".into()))?;
                // conjugate with the window isos: iso_s: cobj_s -> window_s
                let (iso_s_a, iso_s_b) = iso_s;
                let (iso_t_a, iso_t_b) = iso_t;
                let a_w = up.a_cat.then(
                    &up.a_cat.invert(iso_s_a).expect("iso"),
                    &up.a_cat.then(&a, iso_t_a),
                );
                let b_w = t_pkg.cat.then(
                    &t_pkg.cat.invert(iso_s_b).expect("iso"),
                    &t_pkg.cat.then(&b, iso_t_b),
                );
                let down_mor = down
                    .mor_from_pair(*idx_s, *idx_t, &a_w, &b_w)
                    .ok_or_else(|| StableError::Other("cone image not a comma morphism".into()))?;
                // project into the factor category
                let proj = down_factor
                    .proj
                    .apply_mor(&down.cat, &down_factor.cat, &down_mor);
                for (cix, &v) in down_factor.cat.flatten(&proj).iter().enumerate() {
                    m.set(k, cix, v);
                }
            }
            rowm.push(m);
        }
        hom_map.push(rowm);
    }
    // the factor functor: descends to up/LT
    let raw = AdditiveFunctor { obj_map, hom_map };
    // verify LT is killed: kernel of the raw functor contains LT
    let mut ok_lt = true;
    for i in 0..n {
        for j in 0..n {
            let sp = &lt.spaces[i][j];
            for r in 0..sp.rows() {
                let mut mb = up
                    .cat
                    .zero_mor(&FormalSum::single(i), &FormalSum::single(j));
                mb.blocks[0][0] = sp.row(r).to_vec();
                let img = raw.apply_mor(&up.cat, &down_factor.cat, &mb);
                if !down_factor.cat.is_zero_mor(&img) {
                    ok_lt = false;
                }
            }
        }
    }
    checks.push(Check::new(
        "cone functor kills left-trivial morphisms",
        "the cone functor vanishes on the left-trivial ideal",
        ok_lt,
        String::new(),
    ));
    // induced functor on up/LT: hom maps factor through the quotient
    let nq = up_factor.cat.num_objects();
    let mut fq_hom = Vec::with_capacity(nq);
    for i in 0..nq {
        let mut row = Vec::with_capacity(nq);
        for j in 0..nq {
            // lift quotient basis, apply raw
            let lift = &up_factor.lift[i][j];
            row.push(lift.mul(&raw.hom_map[i][j]));
        }
        fq_hom.push(row);
    }
    let functor = AdditiveFunctor {
        obj_map: raw.obj_map.clone(),
        hom_map: fq_hom,
    };
    let bad = functor.validate(&up_factor.cat, &down_factor.cat);
    checks.push(Check::new(
        "cone functor additive on the factor categories",
        "well-definedness of the induced cone functor",
        bad.is_empty(),
        bad.join("; "),
    ));
    Ok(ConeFunctorData {
        up_factor,
        down_factor,
        functor,
        checks,
    })
}

/// Naturality-style check data is assembled by callers; here we only expose
/// the analysis of the cone functor as an equivalence.
pub fn cone_equivalence_checks(
    data: &ConeFunctorData,
    seed: u64,
) -> Vec<Check> {
    let targets: Vec<FormalSum> = (0..data.down_factor.cat.num_objects())
        .filter(|&i| !data.down_factor.cat.is_zero_object(i))
        .map(FormalSum::single)
        .collect();
    let analysis = crate::fincat::analyze_functor(
        &data.up_factor.cat,
        &data.down_factor.cat,
        &data.functor,
        &targets,
        seed,
    );
    vec![
        Check::new(
            "cone functor full and faithful on factor categories",
            "the induced cone functor is an equivalence",
            analysis.full && analysis.faithful,
            String::new(),
        ),
        Check::new(
            "cone functor dense",
            "every downward object is isomorphic to a cone",
            analysis.dense,
            String::new(),
        ),
    ]
}

/// Identity-functor tables for building morphism categories as downward
/// comma windows.
pub fn identity_table(cat: &FinAddCategory) -> AdditiveFunctor {
    AdditiveFunctor::identity(cat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inflation::build_stable_module_cat;
    use std::rc::Rc;

    fn mor_window(p: usize, q: u32) -> (Rc<StablePkg>, CommaCat) {
        let u = Rc::new(build_stable_module_cat(p, q, 11).unwrap());
        let idt = identity_table(&u.cat);
        let cc = build_comma(
            CommaDir::Down,
            &u.cat,
            &u.cat,
            &idt,
            &CommaBounds {
                max_sum_len: 1,
                enum_cap: 1 << 12,
            },
            11,
        )
        .unwrap();
        (u, cc)
    }

    #[test]
    fn morphism_category_p2() {
        let (_u, cc) = mor_window(2, 2);
        // U-skeleton has one object k with End = k; comma objects up to iso:
        // (0,0;0), (k,0;0), (0,k;0), (k,k;0), (k,k;1)
        assert_eq!(cc.objects.len(), 5);
        assert!(cc.cat.validate().is_empty());
    }

    #[test]
    fn rt_square_zero_and_membership() {
        let (u, cc) = mor_window(2, 2);
        let rt = rt_ideal(&cc).unwrap();
        assert!(crate::fincat::is_square_zero(&cc.cat, &rt));
        // every pair (0, s then f2) that is a morphism lies in the ideal
        let mut seen_nonzero = false;
        for (i, o1) in cc.objects.iter().enumerate() {
            for (j, o2) in cc.objects.iter().enumerate() {
                let fa2 = cc.f_table.apply_obj(&o2.a);
                let sd = u.cat.block_dim(&o1.x, &fa2);
                for k in 0..sd {
                    let mut flat = vec![0u32; sd];
                    flat[k] = 1;
                    let s = u.cat.unflatten(&o1.x, &fa2, &flat);
                    let b = u.cat.then(&s, &o2.f);
                    let a = u.cat.zero_mor(&o1.a, &o2.a);
                    if let Some(coords) = cc.coords_of_pair(i, j, &a, &b) {
                        assert!(rt.contains_coords(i, j, &coords));
                        if coords.iter().any(|&v| v != 0) {
                            seen_nonzero = true;
                        }
                    }
                }
            }
        }
        assert!(seen_nonzero, "no nonzero right-trivial morphism exercised");
        // identities with a nonzero first component are never right trivial
        let id_idx = cc
            .objects
            .iter()
            .position(|o| o.a.len() == 1 && o.x.len() == 1 && !u.cat.is_zero_mor(&o.f))
            .unwrap();
        let o = &cc.objects[id_idx];
        let ida = u.cat.identity(&o.a);
        let idb = u.cat.identity(&o.x);
        let idc = cc.coords_of_pair(id_idx, id_idx, &ida, &idb).unwrap();
        assert!(!rt.contains_coords(id_idx, id_idx, &idc));
    }

    #[test]
    fn hpt_contains_rt_and_identity_of_nonsplit_excluded() {
        let (u, cc) = mor_window(3, 2);
        let rt = rt_ideal(&cc).unwrap();
        let hpt = hpt_ideal(&cc).unwrap();
        assert!(hpt.contains_ideal(&rt));
        // identity on (k, k2; t-embed is not present at len 1 sums over the
        // stable category; use any object with nonzero non-invertible f)
        for (i, o) in cc.objects.iter().enumerate() {
            if !u.cat.is_zero_mor(&o.f) && u.cat.invert(&o.f).is_none() {
                let ida = u.cat.identity(&o.a);
                let idb = u.cat.identity(&o.x);
                let coords = cc.coords_of_pair(i, i, &ida, &idb).unwrap();
                assert!(
                    !hpt.contains_coords(i, i, &coords),
                    "identity of a non-split object must not be null-homotopic"
                );
            }
        }
    }

    #[test]
    fn cone_functor_equivalence_p3() {
        let u = Rc::new(build_stable_module_cat(3, 2, 11).unwrap());
        let idt = identity_table(&u.cat);
        let bounds = CommaBounds {
            max_sum_len: 1,
            enum_cap: 1 << 12,
        };
        let up = build_comma(CommaDir::Up, &u.cat, &u.cat, &idt, &bounds, 11).unwrap();
        let down0 = build_comma(CommaDir::Down, &u.cat, &u.cat, &idt, &bounds, 11).unwrap();
        let cones: Vec<CommaObj> = up
            .objects
            .iter()
            .map(|o| {
                let tri = u.cone_triangle(&o.f).unwrap();
                CommaObj {
                    a: o.a.clone(),
                    x: tri.z.clone(),
                    f: tri.g.clone(),
                }
            })
            .collect();
        let down = extend_comma(&down0, &cones, 11).unwrap();
        let data = cone_functor(&u, &up, &down, 11).unwrap();
        assert!(crate::recollement::all_pass(&data.checks), "{:?}", data.checks);
        let eq = cone_equivalence_checks(&data, 11);
        assert!(crate::recollement::all_pass(&eq), "{:?}", eq);
    }

    #[test]
    fn cone_of_iso_and_zero() {
        // g iso -> cone (a, 0; 0); g = 0 -> cone (a, F(a)+Sigma x; incl)
        let u = Rc::new(build_stable_module_cat(3, 2, 11).unwrap());
        let idt = identity_table(&u.cat);
        let bounds = CommaBounds {
            max_sum_len: 1,
            enum_cap: 1 << 12,
        };
        let up = build_comma(CommaDir::Up, &u.cat, &u.cat, &idt, &bounds, 11).unwrap();
        for o in &up.objects {
            if o.a.len() == 1 && o.x.len() == 1 && u.cat.is_iso(&o.f) {
                let tri = u.cone_triangle(&o.f).unwrap();
                assert!(tri.z.is_empty(), "cone of iso must vanish");
            }
            if o.a.len() == 1 && o.x.len() == 1 && u.cat.is_zero_mor(&o.f) {
                let tri = u.cone_triangle(&o.f).unwrap();
                // cone of x -> F(a) for zero map: F(a) + Sigma x
                let expect = idt
                    .apply_obj(&o.a)
                    .concat(&u.sigma.apply_obj(&o.x));
                assert!(tri.z.same_multiset(&expect));
            }
        }
    }
}
