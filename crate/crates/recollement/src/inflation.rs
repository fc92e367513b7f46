//! The concrete instance: the stable submodule category of k[t]/(t^p), its
//! six-functor recollement over the stable module category, and every
//! unit/counit/connecting datum, all built by explicit linear algebra.
//!
//! Objects of the submodule category are inflation pairs (X1 -> X0). The
//! skeleton is found by a closure loop: seed with the canonical images of
//! the stable module category, then repeatedly apply suspension, syzygy and
//! mapping cones, decompose, and deduplicate up to isomorphism.

use crate::algebra::{truncated_polynomial_algebra, Algebra, Module};
use crate::backend::{Backend, InfMor, InfObj, Rep, RepMor};
use crate::concrete::{omega_compose, omega_exact, ConcreteAction, ConcreteFunctor};
use crate::fincat::NatTransform;
use crate::fq::FqMatrix;
use crate::modops;
use crate::recollement::{Recollement, TriFunctor};
use crate::stable::{Result, StableError, StablePkg};
use std::rc::Rc;
use std::sync::Arc;

/// Bounds for the skeleton closure loop.
#[derive(Clone, Debug)]
pub struct ClosureBounds {
    pub max_objects: usize,
    pub max_total_dim: usize,
    pub max_rounds: usize,
    /// enumerate all morphisms of a hom space for cone formation only when
    /// the space has at most this many elements
    pub cone_enum_cap: u64,
}

impl ClosureBounds {
    pub fn for_p(p: usize) -> ClosureBounds {
        ClosureBounds {
            max_objects: 40 + 10 * p,
            max_total_dim: 4 * p + 2,
            max_rounds: 8,
            cone_enum_cap: 1 << 10,
        }
    }
}

pub struct InflationInstance {
    pub p: usize,
    pub q: u32,
    pub alg: Arc<Algebra>,
    /// stable module category of k[t]/(t^p) (both outer categories)
    pub u: Rc<StablePkg>,
    /// stable submodule category (the middle category)
    pub t1: Rc<StablePkg>,
    /// report notes from the closure loop
    pub closure_notes: Vec<String>,
    pub seed: u64,
}

pub fn jordan_module(alg: &Arc<Algebra>, b: usize) -> Module {
    let q = alg.q;
    let t = FqMatrix::from_fn(q, b, b, |r, c| i64::from(c == r + 1));
    let gens = if alg.dim() > 1 {
        vec![FqMatrix::identity(q, b), t]
    } else {
        vec![FqMatrix::identity(q, b)]
    };
    Module::from_generator_actions(alg, &gens).expect("jordan module")
}

/// Builds the stable module category of k[t]/(t^p) on the full window of
/// Jordan types.
pub fn build_stable_module_cat(p: usize, q: u32, seed: u64) -> Result<StablePkg> {
    let alg = truncated_polynomial_algebra(p, q).map_err(StableError::Algebra)?;
    let be = Backend::module_cat(alg.clone(), seed)?;
    let window: Vec<Rep> = (1..=p).map(|b| Rep::Mod(jordan_module(&alg, b))).collect();
    StablePkg::build(be, window)
}

fn canonical_key(obj: &InfObj) -> Vec<u32> {
    let mut k = vec![
        (obj.x1.dim + obj.x0.dim) as u32,
        obj.x1.dim as u32,
        obj.x0.dim as u32,
    ];
    for b in 0..obj.x1.algebra.dim() {
        k.extend_from_slice(obj.x1.action(b).data());
    }
    for b in 0..obj.x0.algebra.dim() {
        k.extend_from_slice(obj.x0.action(b).data());
    }
    k.extend_from_slice(obj.f.data());
    k
}

/// Enumerates the indecomposable objects of the submodule category within
/// bounds and builds its stable category.
pub fn build_inflation_category(
    p: usize,
    q: u32,
    seed: u64,
    bounds: &ClosureBounds,
) -> Result<InflationInstance> {
    if !(2..=5).contains(&p) {
        // larger p would leave the representation-finite regime
        if p > 5 {
            return Err(StableError::Other(format!(
                "p = {p} is outside the representation-finite range 2..=5"
            )));
        }
        return Err(StableError::Other("p must be at least 2".into()));
    }
    let alg = truncated_polynomial_algebra(p, q).map_err(StableError::Algebra)?;
    let u = Rc::new(build_stable_module_cat(p, q, seed)?);
    let be = Backend::inflation_cat(alg.clone(), seed)?;
    let mut notes = Vec::new();

    let mut objs: Vec<InfObj> = Vec::new();
    let add_obj = |be: &Backend, objs: &mut Vec<InfObj>, cand: InfObj| -> bool {
        if cand.x1.dim + cand.x0.dim == 0 {
            return false;
        }
        for existing in objs.iter() {
            if (existing.x1.dim, existing.x0.dim) == (cand.x1.dim, cand.x0.dim)
                && be
                    .find_iso(&Rep::Inf(existing.clone()), &Rep::Inf(cand.clone()))
                    .is_some()
            {
                return false;
            }
        }
        objs.push(cand);
        true
    };

    // seeds: i, j_lambda, j_rho images of the Jordan modules and the
    // indecomposable projectives
    for b in 1..=p {
        let m = jordan_module(&alg, b);
        let ik = be.make_inf(m.clone(), m.clone(), FqMatrix::identity(q, b))?;
        add_obj(&be, &mut objs, ik);
        let (qm, e) = be.hull_module(&m)?;
        let jl = be.make_inf(m.clone(), qm, e)?;
        add_obj(&be, &mut objs, jl);
        let jr = be.make_inf(
            Module::zero(&alg),
            m.clone(),
            FqMatrix::zeros(q, 0, b),
        )?;
        add_obj(&be, &mut objs, jr);
    }

    let mut round = 0;
    loop {
        round += 1;
        let mut added = false;
        let snapshot = objs.clone();
        // suspensions and syzygies
        for o in &snapshot {
            let r = Rep::Inf(o.clone());
            let (qo, e) = be.hull(&r)?;
            let (s, _) = be.cokernel(&r, &qo, &e)?;
            for (part, _, _) in be.decompose(&s)? {
                if let Rep::Inf(pi) = part {
                    if pi.x1.dim + pi.x0.dim <= bounds.max_total_dim {
                        added |= add_obj(&be, &mut objs, pi);
                    } else {
                        notes.push(format!(
                            "dropped suspension summand of dim {} (bound {})",
                            s.total_dim(),
                            bounds.max_total_dim
                        ));
                    }
                }
            }
            let (po, c) = be.cover(&r)?;
            let (k, _) = be.kernel(&po, &r, &c)?;
            for (part, _, _) in be.decompose(&k)? {
                if let Rep::Inf(pi) = part {
                    if pi.x1.dim + pi.x0.dim <= bounds.max_total_dim {
                        added |= add_obj(&be, &mut objs, pi);
                    }
                }
            }
        }
        // cones of morphisms between window objects
        let snapshot = objs.clone();
        for x in &snapshot {
            for y in &snapshot {
                let rx = Rep::Inf(x.clone());
                let ry = Rep::Inf(y.clone());
                let basis = be.hom_basis_mor(&rx, &ry)?;
                if basis.is_empty() {
                    continue;
                }
                let mut candidates: Vec<RepMor> = Vec::new();
                if modops::space_size(q, basis.len()) <= bounds.cone_enum_cap {
                    modops::enumerate_coeffs(q, basis.len(), |coeffs| {
                        let mut m = be.zero_mor(&rx, &ry);
                        for (k, &c) in coeffs.iter().enumerate() {
                            if c != 0 {
                                m = be.add_mor(&m, &be.scale_mor(&basis[k], c));
                            }
                        }
                        candidates.push(m);
                        false
                    });
                } else {
                    candidates.extend(basis.iter().cloned());
                }
                for f in candidates {
                    if be.is_zero_mor(&f) {
                        continue;
                    }
                    // cone: cokernel of (hull embed, -f)
                    let (qx, e) = be.hull(&rx)?;
                    let (qy2, injs, _) = be.direct_sum(&[&qx, &ry]);
                    let m = be.add_mor(
                        &be.then(&e, &injs[0]),
                        &be.then(&be.neg_mor(&f), &injs[1]),
                    );
                    if !be.is_inflation(&rx, &qy2, &m)? {
                        continue;
                    }
                    let (cone, _) = be.cokernel(&rx, &qy2, &m)?;
                    for (part, _, _) in be.decompose(&cone)? {
                        if let Rep::Inf(pi) = part {
                            if pi.x1.dim + pi.x0.dim <= bounds.max_total_dim {
                                added |= add_obj(&be, &mut objs, pi);
                            }
                        }
                    }
                    if objs.len() > bounds.max_objects {
                        break;
                    }
                }
            }
        }
        if objs.len() > bounds.max_objects {
            notes.push(format!(
                "object bound {} reached; window may be incomplete",
                bounds.max_objects
            ));
            break;
        }
        if !added {
            notes.push(format!("closure reached after {round} rounds"));
            break;
        }
        if round >= bounds.max_rounds {
            notes.push(format!("round bound {round} reached; window may be incomplete"));
            break;
        }
    }
    objs.sort_by(|a, b| canonical_key(a).cmp(&canonical_key(b)));
    let window: Vec<Rep> = objs.into_iter().map(Rep::Inf).collect();
    let t1 = Rc::new(StablePkg::build(be, window)?);
    Ok(InflationInstance {
        p,
        q,
        alg,
        u,
        t1,
        closure_notes: notes,
        seed,
    })
}

// --- concrete functor actions -------------------------------------------

struct IAction;
impl ConcreteAction for IAction {
    fn act_obj(&self, _d: &StablePkg, cod: &StablePkg, x: &Rep) -> Result<Rep> {
        let m = x.as_module().clone();
        let f = FqMatrix::identity(cod.q(), m.dim);
        Ok(Rep::Inf(cod.be.make_inf(m.clone(), m, f)?))
    }
    fn act_mor(
        &self,
        _d: &StablePkg,
        _c: &StablePkg,
        _x: &Rep,
        _y: &Rep,
        f: &RepMor,
    ) -> Result<RepMor> {
        let m = f.as_matrix().clone();
        Ok(RepMor::Inf(InfMor {
            a1: m.clone(),
            a0: m,
        }))
    }
}

struct PAction {
    component: usize,
}
impl ConcreteAction for PAction {
    fn act_obj(&self, _d: &StablePkg, _c: &StablePkg, x: &Rep) -> Result<Rep> {
        let p = x.as_inf();
        Ok(Rep::Mod(if self.component == 1 {
            p.x1.clone()
        } else {
            p.x0.clone()
        }))
    }
    fn act_mor(
        &self,
        _d: &StablePkg,
        _c: &StablePkg,
        _x: &Rep,
        _y: &Rep,
        f: &RepMor,
    ) -> Result<RepMor> {
        let m = f.as_inf();
        Ok(RepMor::Mod(if self.component == 1 {
            m.a1.clone()
        } else {
            m.a0.clone()
        }))
    }
}

/// Cokernel of the structure map, as a functor to the module category.
struct CokAction;
impl CokAction {
    fn coker(x: &InfObj) -> Result<(Module, FqMatrix)> {
        x.x0.quotient(&x.f.row_space()).map_err(StableError::Algebra)
    }
}
impl ConcreteAction for CokAction {
    fn act_obj(&self, _d: &StablePkg, _c: &StablePkg, x: &Rep) -> Result<Rep> {
        Ok(Rep::Mod(Self::coker(x.as_inf())?.0))
    }
    fn act_mor(
        &self,
        _d: &StablePkg,
        cod: &StablePkg,
        x: &Rep,
        y: &Rep,
        f: &RepMor,
    ) -> Result<RepMor> {
        let (cx, px) = Self::coker(x.as_inf())?;
        let (cy, py) = Self::coker(y.as_inf())?;
        let rhs = f.as_inf().a0.mul(&py);
        let (sol, _) = cod.be.solve_hom(
            &Rep::Mod(cx),
            &Rep::Mod(cy),
            |g| {
                let m = px.mul(g.as_matrix());
                m.data().to_vec()
            },
            &rhs.data().to_vec(),
        )?;
        sol.ok_or_else(|| StableError::Other("cokernel induction failed".into()))
    }
}

/// Syzygy as a functor on the module category (cover, kernel).
struct OmegaAction;
impl ConcreteAction for OmegaAction {
    fn act_obj(&self, _d: &StablePkg, cod: &StablePkg, x: &Rep) -> Result<Rep> {
        let (p, c) = cod.be.cover(x)?;
        let (k, _) = cod.be.kernel(&p, x, &c)?;
        Ok(k)
    }
    fn act_mor(
        &self,
        _d: &StablePkg,
        cod: &StablePkg,
        x: &Rep,
        y: &Rep,
        f: &RepMor,
    ) -> Result<RepMor> {
        let be = &cod.be;
        let (px, cx) = be.cover(x)?;
        let (kx, ix) = be.kernel(&px, x, &cx)?;
        let (py, cy) = be.cover(y)?;
        let (ky, iy) = be.kernel(&py, y, &cy)?;
        let rhs = be.then(&cx, f);
        let (pf, _) = be.solve_hom(
            &px,
            &py,
            |g| be.flatten_mor(&be.then(g, &cy)),
            &be.flatten_mor(&rhs),
        )?;
        let pf = pf.ok_or_else(|| StableError::Other("cover lift failed".into()))?;
        let rhs2 = be.then(&ix, &pf);
        let (of, _) = be.solve_hom(
            &kx,
            &ky,
            |g| be.flatten_mor(&be.then(g, &iy)),
            &be.flatten_mor(&rhs2),
        )?;
        of.ok_or_else(|| StableError::Other("kernel restriction failed".into()))
    }
}

/// j = Omega . Cok as one concrete action.
struct JAction;
impl ConcreteAction for JAction {
    fn act_obj(&self, d: &StablePkg, cod: &StablePkg, x: &Rep) -> Result<Rep> {
        let c = CokAction.act_obj(d, cod, x)?;
        OmegaAction.act_obj(d, cod, &c)
    }
    fn act_mor(
        &self,
        d: &StablePkg,
        cod: &StablePkg,
        x: &Rep,
        y: &Rep,
        f: &RepMor,
    ) -> Result<RepMor> {
        let cx = CokAction.act_obj(d, cod, x)?;
        let cy = CokAction.act_obj(d, cod, y)?;
        let cf = CokAction.act_mor(d, cod, x, y, f)?;
        OmegaAction.act_mor(d, cod, &cx, &cy, &cf)
    }
}

struct JLambdaAction;
impl ConcreteAction for JLambdaAction {
    fn act_obj(&self, _d: &StablePkg, cod: &StablePkg, x: &Rep) -> Result<Rep> {
        let m = x.as_module().clone();
        let (qm, e) = cod.be.hull_module(&m)?;
        Ok(Rep::Inf(cod.be.make_inf(m, qm, e)?))
    }
    fn act_mor(
        &self,
        _d: &StablePkg,
        cod: &StablePkg,
        x: &Rep,
        y: &Rep,
        f: &RepMor,
    ) -> Result<RepMor> {
        let mx = x.as_module();
        let my = y.as_module();
        let (qx, ex) = cod.be.hull_module(mx)?;
        let (qy, ey) = cod.be.hull_module(my)?;
        let a = f.as_matrix();
        // extension Q(a): Q(x) -> Q(y) with ex.Q(a) = a.ey
        let rhs = a.mul(&ey);
        let (sol, _) = cod.be.solve_hom(
            &Rep::Mod(qx),
            &Rep::Mod(qy),
            |g| ex.mul(g.as_matrix()).data().to_vec(),
            &rhs.data().to_vec(),
        )?;
        let qa = sol.ok_or_else(|| StableError::Other("hull extension failed".into()))?;
        Ok(RepMor::Inf(InfMor {
            a1: a.clone(),
            a0: qa.as_matrix().clone(),
        }))
    }
}

/// j_rho(M) = (0, Sigma' M; 0) with Sigma' computed from the shared hulls.
struct JRhoAction;
impl JRhoAction {
    fn susp(u: &StablePkg, m: &Module) -> Result<(Module, FqMatrix, Module, FqMatrix)> {
        // returns (Q, e, Sigma'M, proj)
        let (qm, e) = u.be.hull_module(m)?;
        let (s, pr) = u.be.cokernel(
            &Rep::Mod(m.clone()),
            &Rep::Mod(qm.clone()),
            &RepMor::Mod(e.clone()),
        )?;
        Ok((
            qm,
            e,
            s.as_module().clone(),
            pr.as_matrix().clone(),
        ))
    }
}
impl ConcreteAction for JRhoAction {
    fn act_obj(&self, d: &StablePkg, cod: &StablePkg, x: &Rep) -> Result<Rep> {
        let m = x.as_module();
        let (_, _, s, _) = Self::susp(d, m)?;
        let z = Module::zero(&m.algebra);
        let f = FqMatrix::zeros(cod.q(), 0, s.dim);
        Ok(Rep::Inf(cod.be.make_inf(z, s, f)?))
    }
    fn act_mor(
        &self,
        d: &StablePkg,
        _c: &StablePkg,
        x: &Rep,
        y: &Rep,
        f: &RepMor,
    ) -> Result<RepMor> {
        let mx = x.as_module();
        let my = y.as_module();
        let (qx, ex, sx, px) = Self::susp(d, mx)?;
        let (qy, ey, sy, py) = Self::susp(d, my)?;
        let a = f.as_matrix();
        let rhs = a.mul(&ey);
        let (sol, _) = d.be.solve_hom(
            &Rep::Mod(qx.clone()),
            &Rep::Mod(qy.clone()),
            |g| ex.mul(g.as_matrix()).data().to_vec(),
            &rhs.data().to_vec(),
        )?;
        let qa = sol.ok_or_else(|| StableError::Other("hull extension failed".into()))?;
        let rhs2 = qa.as_matrix().mul(&py);
        let (sa, _) = d.be.solve_hom(
            &Rep::Mod(sx.clone()),
            &Rep::Mod(sy.clone()),
            |g| px.mul(g.as_matrix()).data().to_vec(),
            &rhs2.data().to_vec(),
        )?;
        let sa = sa.ok_or_else(|| StableError::Other("suspension induction failed".into()))?;
        Ok(RepMor::Inf(InfMor {
            a1: FqMatrix::zeros(d.q(), 0, 0),
            a0: sa.as_matrix().clone(),
        }))
    }
}

// --- the recollement assembly --------------------------------------------

pub struct BuiltRecollement {
    pub rec: Recollement,
    /// unit of (i_rho, j_lambda)
    pub theta: NatTransform,
    /// counit, an isomorphism
    pub theta_p: NatTransform,
}

/// Assembles the six functors and every unit/counit/connecting datum of the
/// recollement carried by the stable submodule category.
pub fn build_recollement(inst: &InflationInstance) -> Result<BuiltRecollement> {
    let u = inst.u.clone();
    let t1 = inst.t1.clone();
    let be1 = &t1.be;
    let beu = &u.be;

    let i_f = ConcreteFunctor::build(u.clone(), t1.clone(), Box::new(IAction))?;
    let il_f = ConcreteFunctor::build(t1.clone(), u.clone(), Box::new(PAction { component: 0 }))?;
    let ir_f = ConcreteFunctor::build(t1.clone(), u.clone(), Box::new(PAction { component: 1 }))?;
    let j_f = ConcreteFunctor::build(t1.clone(), u.clone(), Box::new(JAction))?;
    let jl_f = ConcreteFunctor::build(u.clone(), t1.clone(), Box::new(JLambdaAction))?;
    let jr_f = ConcreteFunctor::build(u.clone(), t1.clone(), Box::new(JRhoAction))?;

    let nsu = u.num_skel();
    let ns1 = t1.num_skel();

    // epsilon: i i_rho -> Id_T, component at X: (id, f): (X1, X1; id) -> X
    let mut eps = Vec::with_capacity(ns1);
    // psi: Id_T -> i i_lambda, component (f, id): X -> (X0, X0; id)
    let mut psi = Vec::with_capacity(ns1);
    for s in 0..ns1 {
        let x = t1.skeleton_rep(s).clone();
        let xi = x.as_inf().clone();
        let rx = t1.realize(&x)?;
        {
            let x1 = Rep::Mod(xi.x1.clone());
            let r1 = &ir_f.images[s].1;
            let (img, r_src) = i_f.push(&x1, r1)?;
            let _ = img;
            let c = RepMor::Inf(InfMor {
                a1: FqMatrix::identity(t1.q(), xi.x1.dim),
                a0: xi.f.clone(),
            });
            eps.push(t1.transport(&c, &r_src, &rx));
        }
        {
            let x0 = Rep::Mod(xi.x0.clone());
            let r0 = &il_f.images[s].1;
            let (_img, r_tgt) = i_f.push(&x0, r0)?;
            let c = RepMor::Inf(InfMor {
                a1: xi.f.clone(),
                a0: FqMatrix::identity(t1.q(), xi.x0.dim),
            });
            psi.push(t1.transport(&c, &rx, &r_tgt));
        }
    }

    // eps': Id_{T'} -> i_rho i and psi': i_lambda i -> Id_{T'}: identities
    // transported through the composite realizations
    let mut eps_p = Vec::with_capacity(nsu);
    let mut psi_p = Vec::with_capacity(nsu);
    for m in 0..nsu {
        let mm = u.skeleton_rep(m).clone();
        let rm = u.realize(&mm)?;
        let (i_img, i_r) = (&i_f.images[m].0, &i_f.images[m].1);
        {
            let (_o, r_tgt) = ir_f.push(i_img, i_r)?;
            let idm = beu.identity_mor(&mm);
            eps_p.push(u.transport(&idm, &rm, &r_tgt));
        }
        {
            let (_o, r_src) = il_f.push(i_img, i_r)?;
            let idm = beu.identity_mor(&mm);
            psi_p.push(u.transport(&idm, &r_src, &rm));
        }
    }

    // eta: Id_T -> j_rho j at X: (0, w . pi): X -> (0, Sigma' Omega C; 0)
    let mut eta = Vec::with_capacity(ns1);
    // phi: j_lambda j -> Id_T at X: the lifted pair (u1, u0)
    let mut phi = Vec::with_capacity(ns1);
    for s in 0..ns1 {
        let x = t1.skeleton_rep(s).clone();
        let xi = x.as_inf().clone();
        let rx = t1.realize(&x)?;
        let (c_mod, pi) = CokAction::coker(&xi)?;
        let c_rep = Rep::Mod(c_mod.clone());
        // cover of C and its kernel Omega C
        let (p_c, cover_c) = beu.cover(&c_rep)?;
        let (oc, incl) = beu.kernel(&p_c, &c_rep, &cover_c)?;
        // canonical comparison w: C -> Sigma'(Omega C)
        let (q_oc, e_oc) = beu.hull(&oc)?;
        let (s_oc, p_hull) = beu.cokernel(&oc, &q_oc, &e_oc)?;
        // C as cokernel of incl
        let (c2, pc2) = beu.cokernel(&oc, &p_c, &incl)?;
        let (h, _) = beu.solve_hom(
            &c2,
            &c_rep,
            |g| beu.flatten_mor(&beu.then(&pc2, g)),
            &beu.flatten_mor(&cover_c),
        )?;
        let h = h.ok_or_else(|| StableError::Other("cokernel comparison failed".into()))?;
        let h_inv = beu
            .invert_mor(&h)
            .ok_or_else(|| StableError::Other("cokernel comparison not invertible".into()))?;
        let (uu, _) = beu.solve_hom(
            &p_c,
            &q_oc,
            |g| beu.flatten_mor(&beu.then(&incl, g)),
            &beu.flatten_mor(&e_oc),
        )?;
        let uu = uu.ok_or_else(|| StableError::Other("comparison extension failed".into()))?;
        let rhs = beu.then(&uu, &p_hull);
        let (ubar, _) = beu.solve_hom(
            &c2,
            &s_oc,
            |g| beu.flatten_mor(&beu.then(&pc2, g)),
            &beu.flatten_mor(&rhs),
        )?;
        let ubar = ubar.ok_or_else(|| StableError::Other("comparison induction failed".into()))?;
        let w = beu.then(&h_inv, &ubar); // C -> Sigma' Omega C
        // eta component: pair (empty, pi then w)
        {
            let jx = &j_f.images[s];
            let (jrjx, r_tgt) = jr_f.push(&jx.0, &jx.1)?;
            let tgt_inf = jrjx.as_inf();
            // the x0 part of j_rho(Omega C) is Sigma'(Omega C) computed with
            // the same shared hull, so w lands exactly there
            assert_eq!(tgt_inf.x0.dim, match &w { RepMor::Mod(m) => m.cols(), _ => 0 });
            let comp = RepMor::Inf(InfMor {
                a1: FqMatrix::zeros(t1.q(), xi.x1.dim, 0),
                a0: pi.mul(w.as_matrix()),
            });
            eta.push(t1.transport(&comp, &rx, &r_tgt));
        }
        // phi component: (u1, u0) with u1 from the lifted cover, u0 through
        // the hull of Omega C
        {
            let lambda = {
                // lift: P(C) -> X0 with lambda . pi = cover_c
                let rhs = beu.flatten_mor(&cover_c);
                let (sol, _) = beu.solve_hom(
                    &p_c,
                    &Rep::Mod(xi.x0.clone()),
                    |g| g.as_matrix().mul(&pi).data().to_vec(),
                    &rhs,
                )?;
                sol.ok_or_else(|| StableError::Other("cover lift through pi failed".into()))?
            };
            // u1: Omega C -> X1 with u1 . f = incl . lambda
            let rhs = beu.then(&incl, &lambda);
            let (u1, _) = beu.solve_hom(
                &oc,
                &Rep::Mod(xi.x1.clone()),
                |g| g.as_matrix().mul(&xi.f).data().to_vec(),
                &beu.flatten_mor(&rhs),
            )?;
            let u1 = u1.ok_or_else(|| StableError::Other("phi: u1 solve failed".into()))?;
            // w0: Q(Omega C) -> P(C) with e_oc . w0 = incl
            let (w0, _) = beu.solve_hom(
                &q_oc,
                &p_c,
                |g| beu.flatten_mor(&beu.then(&e_oc, g)),
                &beu.flatten_mor(&incl),
            )?;
            let w0 = w0.ok_or_else(|| StableError::Other("phi: hull retraction failed".into()))?;
            let u0 = beu.then(&w0, &lambda);
            let jx = &j_f.images[s];
            let (jljx, r_src) = jl_f.push(&jx.0, &jx.1)?;
            let src_inf = jljx.as_inf();
            assert_eq!(src_inf.x1.dim, oc.total_dim());
            let comp = RepMor::Inf(InfMor {
                a1: u1.as_matrix().clone(),
                a0: u0.as_matrix().clone(),
            });
            phi.push(t1.transport(&comp, &r_src, &rx));
        }
    }

    // eta': j j_rho -> Id_{T''} and phi': Id_{T''} -> j j_lambda:
    // canonical comparisons Omega Sigma' M -> M
    let mut eta_p = Vec::with_capacity(nsu);
    let mut phi_p = Vec::with_capacity(nsu);
    for m in 0..nsu {
        let mm = u.skeleton_rep(m).clone();
        let rm = u.realize(&mm)?;
        // Omega(Sigma' M) -> M comparison
        let (q_m, e_m) = beu.hull(&mm)?;
        let (s_m, p_m) = beu.cokernel(&mm, &q_m, &e_m)?;
        let (p_s, c_s) = beu.cover(&s_m)?;
        let (os, i_os) = beu.kernel(&p_s, &s_m, &c_s)?;
        // lift: P(Sigma'M) -> Q(M) over Sigma'M
        let (lift, _) = beu.solve_hom(
            &p_s,
            &q_m,
            |g| beu.flatten_mor(&beu.then(g, &p_m)),
            &beu.flatten_mor(&c_s),
        )?;
        let lift = lift.ok_or_else(|| StableError::Other("counit lift failed".into()))?;
        let rhs = beu.then(&i_os, &lift);
        let (ubar, _) = beu.solve_hom(
            &os,
            &mm,
            |g| beu.flatten_mor(&beu.then(g, &e_m)),
            &beu.flatten_mor(&rhs),
        )?;
        let ubar = ubar.ok_or_else(|| StableError::Other("counit comparison failed".into()))?;
        {
            // eta'_M: j(j_rho(M)) -> M
            let jrm = &jr_f.images[m];
            let (jjr, r_src) = j_f.push(&jrm.0, &jrm.1)?;
            assert_eq!(jjr.total_dim(), os.total_dim());
            eta_p.push(u.transport(&ubar, &r_src, &rm));
        }
        {
            // phi'_M: M -> j(j_lambda(M)): the inverse comparison
            let jlm = &jl_f.images[m];
            let (jjl, r_tgt) = j_f.push(&jlm.0, &jlm.1)?;
            assert_eq!(jjl.total_dim(), os.total_dim());
            let comp = u.transport(&ubar, &r_tgt, &rm);
            let inv = u
                .cat
                .invert(&comp)
                .ok_or_else(|| StableError::Other("phi' comparison not invertible".into()))?;
            phi_p.push(inv);
        }
    }

    // theta: Id -> j_lambda i_rho at X: (id_{X1}, extension of hull embed
    // along f); theta': i_rho j_lambda -> Id at M: identity
    let mut theta = Vec::with_capacity(ns1);
    for s in 0..ns1 {
        let x = t1.skeleton_rep(s).clone();
        let xi = x.as_inf().clone();
        let rx = t1.realize(&x)?;
        let (q1, e1) = be1.hull_module(&xi.x1)?;
        // ext: X0 -> Q(X1) with f . ext = e1, as a module map
        let ext = crate::backend::solve_module_hom(&xi.x0, &q1, |g| xi.f.mul(g), &e1)
            .ok_or_else(|| StableError::Other("theta extension failed".into()))?;
        let x1 = Rep::Mod(xi.x1.clone());
        let r1 = &ir_f.images[s].1;
        let (_img, r_tgt) = jl_f.push(&x1, r1)?;
        let _ = q1;
        let comp = RepMor::Inf(InfMor {
            a1: FqMatrix::identity(t1.q(), xi.x1.dim),
            a0: ext,
        });
        theta.push(t1.transport(&comp, &rx, &r_tgt));
    }
    let mut theta_p = Vec::with_capacity(nsu);
    for m in 0..nsu {
        let mm = u.skeleton_rep(m).clone();
        let rm = u.realize(&mm)?;
        let jlm = &jl_f.images[m];
        let (_o, r_src) = ir_f.push(&jlm.0, &jlm.1)?;
        let idm = beu.identity_mor(&mm);
        theta_p.push(u.transport(&idm, &r_src, &rm));
    }

    // sigma-commutation witnesses
    let omega_i = omega_exact(&i_f)?;
    let omega_il = omega_exact(&il_f)?;
    let omega_ir = omega_exact(&ir_f)?;
    let cok_f = ConcreteFunctor::build(t1.clone(), u.clone(), Box::new(CokAction))?;
    let omega_cok = omega_exact(&cok_f)?;
    let omega_f = ConcreteFunctor::build(u.clone(), u.clone(), Box::new(OmegaAction))?;
    let omega_omega = {
        // Omega(Sigma s) -> Sigma(Omega s) through the quasi-inverse data
        let mut comps = Vec::with_capacity(nsu);
        for s in 0..nsu {
            let a = &u.os_counit.components[s];
            let b = &u.so_unit.components[s];
            comps.push(u.cat.then(a, b));
        }
        NatTransform { components: comps }
    };
    let omega_j = omega_compose(&omega_f, &cok_f.table, &omega_cok, &omega_omega, &t1);

    let mut rec = Recollement {
        tp: u.clone(),
        t: t1.clone(),
        tpp: u.clone(),
        i: TriFunctor {
            table: i_f.table.clone(),
            comm: omega_i,
        },
        i_lambda: TriFunctor {
            table: il_f.table.clone(),
            comm: omega_il,
        },
        i_rho: TriFunctor {
            table: ir_f.table.clone(),
            comm: omega_ir,
        },
        j: TriFunctor {
            table: j_f.table.clone(),
            comm: omega_j,
        },
        j_lambda: TriFunctor {
            table: jl_f.table.clone(),
            comm: NatTransform { components: vec![] },
        },
        j_rho: TriFunctor {
            table: jr_f.table.clone(),
            comm: NatTransform { components: vec![] },
        },
        eps: NatTransform { components: eps },
        eta: NatTransform { components: eta },
        phi: NatTransform { components: phi },
        psi: NatTransform { components: psi },
        eps_p: NatTransform { components: eps_p },
        eta_p: NatTransform { components: eta_p },
        phi_p: NatTransform { components: phi_p },
        psi_p: NatTransform { components: psi_p },
        delta: NatTransform { components: vec![] },
        sigma_t: NatTransform { components: vec![] },
    };
    // mate constructions for the remaining witnesses
    rec.j_lambda.comm = rec.mate_omega_left_adjoint()?;
    rec.j_rho.comm = rec.mate_omega_right_adjoint()?;
    // connecting morphisms: unique exact completions
    let mut delta = Vec::with_capacity(ns1);
    let mut sigma_t = Vec::with_capacity(ns1);
    for s in 0..ns1 {
        let d = t1.connecting_map(&rec.eps.components[s], &rec.eta.components[s])?;
        delta.push(d);
        let st = t1.connecting_map(&rec.phi.components[s], &rec.psi.components[s])?;
        sigma_t.push(st);
    }
    rec.delta = NatTransform { components: delta };
    rec.sigma_t = NatTransform { components: sigma_t };
    Ok(BuiltRecollement {
        rec,
        theta: NatTransform { components: theta },
        theta_p: NatTransform { components: theta_p },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_p2_matches_brute_force() {
        // oracle: every submodule pair (X1 <= X0) with dim X0 <= 4 over
        // k[t]/(t^2) decomposes into the enumerated skeleton
        let inst = build_inflation_category(2, 2, 7, &ClosureBounds::for_p(2)).unwrap();
        // S(2) has 5 indecomposables: (0,k), (0,A), (k,k), (A,A), (k,A)
        assert_eq!(inst.t1.window.len(), 5);
        // stable skeleton: the three non-projectives
        assert_eq!(inst.t1.num_skel(), 3);
        let alg = inst.alg.clone();
        let be = &inst.t1.be;
        // brute force: X0 ranges over Jordan types of total dim <= 4;
        // X1 over all t-invariant subspaces
        let q = 2u32;
        let mut shapes: Vec<Vec<usize>> = vec![];
        for a in 1..=2usize {
            shapes.push(vec![a]);
            for b in 1..=a {
                if a + b <= 4 {
                    shapes.push(vec![a, b]);
                }
            }
        }
        for shape in shapes {
            let parts: Vec<Module> = shape.iter().map(|&b| jordan_module(&alg, b)).collect();
            let x0 = Module::direct_sum(&parts.iter().collect::<Vec<_>>());
            // enumerate all subspaces by brute force over row spans
            let d = x0.dim;
            let total: u64 = 1 << (d * d.min(2)); // cap the generator patterns
            let _ = total;
            // generate submodules from all subsets of vectors (small d)
            let mut seen = std::collections::HashSet::new();
            for mask in 0..(1u32 << d.min(4)) {
                let mut rows = Vec::new();
                for b in 0..d.min(4) {
                    if mask & (1 << b) != 0 {
                        let mut v = vec![0i64; d];
                        v[b] = 1;
                        rows.push(v);
                    }
                }
                // also include t-translates to make the span a submodule
                if rows.is_empty() {
                    continue;
                }
                let mut span = FqMatrix::from_rows(q, &rows);
                loop {
                    let img = span.mul(x0.action(1));
                    let sum = crate::fq::subspace::sum(&span, &img);
                    if sum == span {
                        break;
                    }
                    span = sum;
                }
                let key: Vec<u32> = span.data().to_vec();
                if !seen.insert((span.rows(), key)) {
                    continue;
                }
                let (x1, incl) = x0.submodule(&span).unwrap();
                if x1.dim == 0 {
                    continue;
                }
                let obj = be.make_inf(x1, x0.clone(), incl).unwrap();
                let r = inst.t1.realize(&Rep::Inf(obj));
                assert!(r.is_ok(), "pair not realized in skeleton");
            }
        }
    }

    #[test]
    fn recollement_builds_at_p2() {
        let inst = build_inflation_category(2, 2, 7, &ClosureBounds::for_p(2)).unwrap();
        let built = build_recollement(&inst).unwrap();
        // j i = 0: the composite table must send every object to zero
        let rec = &built.rec;
        for m in 0..inst.u.num_skel() {
            let ji = rec.j.table.apply_obj(&rec.i.table.obj_map[m]);
            assert!(ji.is_empty(), "j(i(M)) nonzero");
        }
        // theta' invertible
        for c in &built.theta_p.components {
            assert!(inst.u.cat.is_iso(c));
        }
    }
}
