//! Functors between stable categories given by concrete actions.
//!
//! A `ConcreteFunctor` pairs the abstract tables (object map as formal sums,
//! hom maps as matrices) with the underlying concrete action on backend
//! objects and morphisms. The `push` operation extends a realization along
//! the functor so that transform components can be constructed concretely
//! and transported into exactly the coordinates of composite-functor tables.

use crate::backend::{Rep, RepMor};
use crate::fincat::{AdditiveFunctor, FormalSum, Morphism, NatTransform};
use crate::fq::FqMatrix;
use crate::stable::{Realized, Result, StableError, StablePkg};
use std::rc::Rc;

/// Concrete action of a functor on backend data.
pub trait ConcreteAction {
    fn act_obj(&self, dom: &StablePkg, cod: &StablePkg, x: &Rep) -> Result<Rep>;
    fn act_mor(
        &self,
        dom: &StablePkg,
        cod: &StablePkg,
        x: &Rep,
        y: &Rep,
        f: &RepMor,
    ) -> Result<RepMor>;
}

pub struct ConcreteFunctor {
    pub dom: Rc<StablePkg>,
    pub cod: Rc<StablePkg>,
    pub table: AdditiveFunctor,
    /// per dom-skeleton object: the concrete image and its realization
    pub images: Vec<(Rep, Realized)>,
    action: Box<dyn ConcreteAction>,
}

impl ConcreteFunctor {
    /// Builds the functor tables from the concrete action.
    pub fn build(
        dom: Rc<StablePkg>,
        cod: Rc<StablePkg>,
        action: Box<dyn ConcreteAction>,
    ) -> Result<ConcreteFunctor> {
        let ns = dom.num_skel();
        let mut images = Vec::with_capacity(ns);
        for s in 0..ns {
            let img = action.act_obj(&dom, &cod, dom.skeleton_rep(s))?;
            let r = cod.realize(&img)?;
            images.push((img, r));
        }
        let obj_map: Vec<FormalSum> = images.iter().map(|(_, r)| r.sum.clone()).collect();
        let mut hom_map = Vec::with_capacity(ns);
        for s in 0..ns {
            let mut row = Vec::with_capacity(ns);
            for t in 0..ns {
                let d = dom.cat.dim(s, t);
                let out_dim = cod.cat.block_dim(&obj_map[s], &obj_map[t]);
                let mut m = FqMatrix::zeros(dom.q(), d, out_dim);
                for k in 0..d {
                    let b = dom.cat.basis_mor(s, t, k);
                    let b_c = dom.lift_stable(&b);
                    let img = action.act_mor(
                        &dom,
                        &cod,
                        dom.skeleton_rep(s),
                        dom.skeleton_rep(t),
                        &b_c,
                    )?;
                    let st = cod.transport(&img, &images[s].1, &images[t].1);
                    for (c, &v) in cod.cat.flatten(&st).iter().enumerate() {
                        m.set(k, c, v);
                    }
                }
                row.push(m);
            }
            hom_map.push(row);
        }
        Ok(ConcreteFunctor {
            dom,
            cod,
            table: AdditiveFunctor { obj_map, hom_map },
            images,
            action,
        })
    }

    pub fn act_obj(&self, x: &Rep) -> Result<Rep> {
        self.action.act_obj(&self.dom, &self.cod, x)
    }

    pub fn act_mor(&self, x: &Rep, y: &Rep, f: &RepMor) -> Result<RepMor> {
        self.action.act_mor(&self.dom, &self.cod, x, y, f)
    }

    /// Extends a realization along the functor: given a concrete object with
    /// its realization in the domain, produces the concrete image with a
    /// realization whose formal sum is exactly `table.apply_obj(r.sum)`.
    pub fn push(&self, obj: &Rep, r: &Realized) -> Result<(Rep, Realized)> {
        let img = self.act_obj(obj)?;
        let be_d = &self.dom.be;
        let be_c = &self.cod.be;
        let sum = self.table.apply_obj(&r.sum);
        let (sumc, sinjs, sprojs) = self.cod.sum_concrete(&sum);
        let (_dc, dinjs, dprojs) = self.dom.sum_concrete(&r.sum);
        let mut to_obj = be_c.zero_mor(&sumc, &img);
        let mut from_obj = be_c.zero_mor(&img, &sumc);
        let mut off = 0;
        for (k, &u) in r.sum.0.iter().enumerate() {
            let ri = &self.images[u].1;
            let rep_u = self.dom.skeleton_rep(u).clone();
            // w_k: rep_u -> obj, v_k: obj -> rep_u
            let w_k = be_d.then(&dinjs[k], &r.to_obj);
            let v_k = be_d.then(&r.from_obj, &dprojs[k]);
            let fw = self.act_mor(&rep_u, obj, &w_k)?;
            let fv = self.act_mor(obj, &rep_u, &v_k)?;
            let (_pc, pinjs, pprojs) = self.cod.sum_concrete(&ri.sum);
            for j in 0..ri.sum.len() {
                let gp = be_c.then(&sprojs[off + j], &pinjs[j]);
                to_obj = be_c.add_mor(&to_obj, &be_c.then(&gp, &be_c.then(&ri.to_obj, &fw)));
                let gi = be_c.then(&pprojs[j], &sinjs[off + j]);
                from_obj = be_c.add_mor(&from_obj, &be_c.then(&fv, &be_c.then(&ri.from_obj, &gi)));
            }
            off += ri.sum.len();
        }
        Ok((
            img,
            Realized {
                sum,
                to_obj,
                from_obj,
            },
        ))
    }
}

/// Sigma-commutation witness for an *exact* concrete functor (one sending
/// conflations to conflations and projectives to projectives): components
/// F(Sigma_dom s) -> Sigma_cod F(s), built by comparing F of the hull
/// presentation of s with the coherent hull presentation of F(s).
pub fn omega_exact(f: &ConcreteFunctor) -> Result<NatTransform> {
    let dom = &f.dom;
    let cod = &f.cod;
    let ns = dom.num_skel();
    let mut comps = Vec::with_capacity(ns);
    for s in 0..ns {
        let x = dom.skeleton_rep(s).clone();
        let (hull, embed, cone, _proj, rcone) = dom.sigma_concrete(s);
        // source: F(Sigma_dom s) realized along F of the cone realization
        let (fsx, r_src) = f.push(cone, rcone)?;
        // F of the conflation: F(X) -> F(Q) -> F(Sigma X)
        let fe = f.act_mor(&x, hull, embed)?;
        let fq = f.act_obj(hull)?;
        let fx = f.act_obj(&x)?;
        let fp = {
            // F(proj): F(Q) -> F(Sigma X)
            let (_, _, _, proj, _) = dom.sigma_concrete(s);
            f.act_mor(hull, cone, proj)?
        };
        // coherent presentation of F(x): sum_hull of its realization
        let rfx = &f.images[s].1;
        let (qsum, esum, ssum, psum, rs) = cod.sum_hull(&rfx.sum);
        // u: F(Q) -> Qsum with fe.u = from_obj.esum
        let rhs = cod.be.then(&rfx.from_obj, &esum);
        let (u, _) = cod.be.solve_hom(
            &fq,
            &qsum,
            |g| cod.be.flatten_mor(&cod.be.then(&fe, g)),
            &cod.be.flatten_mor(&rhs),
        )?;
        let u = u.ok_or_else(|| StableError::Other("omega_exact: extension failed".into()))?;
        // induced ubar: F(Sigma X) -> Ssum with fp.ubar = u.psum
        let rhs2 = cod.be.then(&u, &psum);
        let (ubar, _) = cod.be.solve_hom(
            &fsx,
            &ssum,
            |g| cod.be.flatten_mor(&cod.be.then(&fp, g)),
            &cod.be.flatten_mor(&rhs2),
        )?;
        let ubar = ubar.ok_or_else(|| StableError::Other("omega_exact: induction failed".into()))?;
        let _ = fx;
        let comp = cod.transport(&ubar, &r_src, &rs);
        if !cod.cat.is_iso(&comp) {
            return Err(StableError::Other(
                "omega_exact: comparison is not invertible".into(),
            ));
        }
        let _ = ssum;
        comps.push(comp);
    }
    Ok(NatTransform { components: comps })
}

/// Composite of two Sigma-commutation witnesses: for F: A -> B, G: B -> C
/// with omega_f: F Sigma -> Sigma F and omega_g: G Sigma -> Sigma G, the
/// composite (F then G) gets G(omega_f) then omega_g at F(-).
pub fn omega_compose(
    g_functor: &ConcreteFunctor,
    f_table: &AdditiveFunctor,
    omega_f: &NatTransform,
    omega_g: &NatTransform,
    dom: &StablePkg,
) -> NatTransform {
    let cod = &g_functor.cod;
    let mid = &g_functor.dom;
    let ns = dom.num_skel();
    let mut comps = Vec::with_capacity(ns);
    for s in 0..ns {
        // G(omega_f at s): G F Sigma s -> G Sigma F s
        let part1 = g_functor
            .table
            .apply_mor(&mid.cat, &cod.cat, &omega_f.components[s]);
        // omega_g at F(s): G Sigma (F s) -> Sigma G (F s)
        let part2 = omega_g_at(omega_g, &cod.cat, mid, &f_table.obj_map[s]);
        comps.push(cod.cat.then(&part1, &part2));
    }
    NatTransform { components: comps }
}

/// The component of an omega transform at a formal sum of the (mid) domain:
/// block diagonal of the per-object components.
pub fn omega_g_at(
    omega: &NatTransform,
    cod_cat: &crate::fincat::FinAddCategory,
    _mid: &StablePkg,
    sum: &FormalSum,
) -> Morphism {
    omega.at(cod_cat, sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{truncated_polynomial_algebra, Module};
    use crate::backend::Backend;
    use std::sync::Arc;

    fn jordan(alg: &Arc<crate::algebra::Algebra>, b: usize) -> Module {
        let q = alg.q;
        let t = FqMatrix::from_fn(q, b, b, |r, c| i64::from(c == r + 1));
        let gens = if alg.dim() > 1 {
            vec![FqMatrix::identity(q, b), t]
        } else {
            vec![FqMatrix::identity(q, b)]
        };
        Module::from_generator_actions(alg, &gens).unwrap()
    }

    struct IdentityAction;
    impl ConcreteAction for IdentityAction {
        fn act_obj(&self, _d: &StablePkg, _c: &StablePkg, x: &Rep) -> Result<Rep> {
            Ok(x.clone())
        }
        fn act_mor(
            &self,
            _d: &StablePkg,
            _c: &StablePkg,
            _x: &Rep,
            _y: &Rep,
            f: &RepMor,
        ) -> Result<RepMor> {
            Ok(f.clone())
        }
    }

    #[test]
    fn identity_concrete_functor() {
        let alg = truncated_polynomial_algebra(3, 2).unwrap();
        let be = Backend::module_cat(alg.clone(), 11).unwrap();
        let window: Vec<Rep> = (1..=3).map(|b| Rep::Mod(jordan(&alg, b))).collect();
        let pkg = Rc::new(StablePkg::build(be, window).unwrap());
        let f = ConcreteFunctor::build(pkg.clone(), pkg.clone(), Box::new(IdentityAction)).unwrap();
        assert!(f.table.validate(&pkg.cat, &pkg.cat).is_empty());
        for s in 0..pkg.num_skel() {
            assert_eq!(f.table.obj_map[s], FormalSum::single(s));
        }
        // identity functor is exact: its omega must be a natural isomorphism
        let om = omega_exact(&f).unwrap();
        let sig = pkg.sigma.clone();
        // F Sigma = Sigma, Sigma F = Sigma: omega is an automorphism of Sigma
        assert!(om
            .verify_natural(&pkg.cat, &pkg.cat, &sig, &sig)
            .is_empty());
    }
}
