use crate::cells::{Fes, FormSpace, RefCell, SpaceFamily};
use crate::cells::BoundaryFamilies;
use crate::construct::extension::{family_pairs, kernel_on, mixed_space, pairs, pick_new, traces, Local, Stack};
use crate::construct::inner::{Complement, InnerProduct};
use crate::error::{FesError, Result};
use crate::linalg::{rank_of, split_map, Subspace};
use crate::scalar::Scalar;

/// A compatible system containing `P_rΛ•` on a reference cell: tensor products of trimmed
/// interval spaces of degree `r+1` on cubes, `P_{r+1}^-Λ•` on simplices.
pub fn default_ambient<S: Scalar>(cell: RefCell, r: usize) -> Result<Fes<S>> {
    let family = if cell.is_cube() { SpaceFamily::QrMinus } else { SpaceFamily::PrMinus };
    Fes::reference(cell, family, r + 1)
}

fn require_contained<S: Scalar>(a: &Fes<S>, b: &Fes<S>) -> Result<()> {
    if a.complex().len() != b.complex().len() {
        return Err(FesError::DimensionMismatch { expected: b.complex().len(), found: a.complex().len() });
    }
    for cell in 0..a.complex().len() {
        for (k, (x, y)) in a.spaces(cell).iter().zip(b.spaces(cell)).enumerate() {
            if !y.contains_space(x)? {
                return Err(FesError::NotContained { cell, degree: k });
            }
        }
    }
    Ok(())
}

fn check(ok: bool, cell: usize, degree: usize, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(FesError::ConstructionCheck { cell, degree, what: what.into() })
    }
}

/// `E^k(T)`: zero-trace elements of `B` whose derivative lies in `A^{k+1}_0(T)` and is
/// orthogonal to `dA^k_0(T)`, orthogonal themselves to `dB^{k−1}_0(T)`. In top degree, a
/// complement of `dB^{n−1}_0(T)` when `∫` vanishes on `A^n(T)`, else zero.
fn exact_part<S: Scalar>(a: &Local<S>, b: &Local<S>, k: usize, rule: Complement) -> Subspace<S> {
    match rule {
        Complement::Orthogonal(ip) => orthogonal_exact_part(a, b, k, ip),
        Complement::Pivot => pivot_exact_part(a, b, k),
    }
}

/// Some `u ∈ B^k_0(T)` with `du ∈ A^{k+1}_0(T)`, one per class of `H^{k+1}(A•_0(T))`.
fn pivot_exact_part<S: Scalar>(a: &Local<S>, b: &Local<S>, k: usize) -> Subspace<S> {
    let n = a.dim();
    let bk = b.basis(k);
    if k == n {
        let cube = a.shape.is_cube();
        if a.spaces[n].vectors().iter().any(|v| !bk.integral(v, cube).is_zero()) {
            return Subspace::zero(bk.dim());
        }
        let first = b.spaces[n].vectors().iter().find(|v| !bk.integral(v, cube).is_zero());
        return Subspace::new(bk.dim(), first.cloned());
    }
    let bk1 = b.basis(k + 1);
    let images = b.zero[k]
        .vectors()
        .iter()
        .map(|w| {
            let mut st = Stack::new();
            st.push(a.zero[k + 1].residual(&bk.derivative(w)), bk1.dim());
            st
        })
        .collect();
    let closed = kernel_on(bk.dim(), b.zero[k].vectors(), images);
    let d: Vec<_> = closed.vectors().iter().map(|w| bk.derivative(w)).collect();
    Subspace::new(bk.dim(), pick_new(&a.dzero[k], closed.vectors(), &d))
}

fn orthogonal_exact_part<S: Scalar>(a: &Local<S>, b: &Local<S>, k: usize, ip: InnerProduct) -> Subspace<S> {
    let n = a.dim();
    let bk = b.basis(k);
    if k == n {
        let cube = a.shape.is_cube();
        if a.spaces[n].vectors().iter().any(|v| !bk.integral(v, cube).is_zero()) {
            return Subspace::zero(bk.dim());
        }
        let images = b.spaces[n]
            .vectors()
            .iter()
            .map(|w| {
                let mut st = Stack::new();
                if n > 0 {
                    st.push(pairs(ip, &bk, b.shape, w, &b.dzero[n - 1]), b.dzero[n - 1].len());
                }
                st
            })
            .collect();
        return kernel_on(bk.dim(), b.spaces[n].vectors(), images);
    }
    let bk1 = b.basis(k + 1);
    let images = b.zero[k]
        .vectors()
        .iter()
        .map(|w| {
            let dw = bk.derivative(w);
            let mut st = Stack::new();
            st.push(a.zero[k + 1].residual(&dw), bk1.dim());
            st.push(pairs(ip, &bk1, b.shape, &dw, &a.dzero[k]), a.dzero[k].len());
            if k > 0 {
                st.push(pairs(ip, &bk, b.shape, w, &b.dzero[k - 1]), b.dzero[k - 1].len());
            }
            st
        })
        .collect();
    kernel_on(bk.dim(), b.zero[k].vectors(), images)
}

/// First step: adds to each `A^k(T)` the zero-trace space `E^k(T)` so that
/// `Ã•_0(T) → ℝ` becomes exact on every cell.
///
/// Checked on the way: `E^k(T) → H^{k+1}(A•_0(T))` is an isomorphism (by rank) and the
/// new trace-free sequence is acyclic.
pub fn exactify<S: Scalar>(a: &Fes<S>, b: &Fes<S>, rule: impl Into<Complement>) -> Result<Fes<S>> {
    let rule = rule.into();
    require_contained(a, b)?;
    let bound = a.max_bound().max(b.max_bound());
    let mut spaces = Vec::with_capacity(a.complex().len());
    for cell in 0..a.complex().len() {
        let la = Local::new(a, cell, bound)?;
        let lb = Local::new(b, cell, bound)?;
        let n = la.dim();
        let h = la.zero_cohomology()?;
        let mut row = Vec::with_capacity(n + 1);
        let mut zero = la.clone();
        for k in 0..=n {
            let e = exact_part(&la, &lb, k, rule);
            check(e.dim() == h.at(k + 1), cell, k, "dim E^k differs from dim H^{k+1}")?;
            if k < n && !e.is_zero() {
                let basis = la.basis(k);
                let de: Vec<_> = e.vectors().iter().map(|v| basis.derivative(v)).collect();
                let da = &la.dzero[k];
                let joint = rank_of(de.iter().chain(da).cloned());
                check(joint == e.dim() + rank_of(da.iter().cloned()), cell, k, "d E^k meets d A^k_0")?;
            }
            row.push(FormSpace::from_subspace(la.shape, k, bound, la.spaces[k].sum(&e)?)?);
            zero.zero[k] = la.zero[k].sum(&e)?;
        }
        let degree = (0..=n + 1).find(|&k| zero.zero_cohomology().map(|h| h.at(k) != 0).unwrap_or(true));
        if let Some(degree) = degree {
            return Err(FesError::ExactnessViolated { cell, degree });
        }
        spaces.push(row);
    }
    Fes::new(a.complex().clone(), spaces)
}

/// Second step: on cells of increasing dimension, lifts boundary families into `B` so that
/// every compatible boundary family extends, without changing any trace-free space.
///
/// The families split as `Ã^k(∂T) = tr A^k(T) ⊕ F^k ⊕ G^k` with
/// `F^k = {u : u ⊥ tr A^k(T), du ∈ tr A^{k+1}(T)}` and
/// `G^k = {u : du ⊥ tr A^{k+1}(T) ∩ dÃ^k(∂T), u ⊥ ker d}`, orthogonality taken with the sum
/// of the per-facet products. Degrees are handled from the top down and `F ⊕ G` is lifted by
/// mixed extensions relative to the already enlarged `Ã^{k+1}(T)`, which keeps
/// `dÃ^k(T) ⊆ Ã^{k+1}(T)`. With [`Complement::Pivot`] any lift of a complement of
/// `tr A^k(T)` is taken instead.
pub fn extend_to_compatible<S: Scalar>(a: &Fes<S>, b: &Fes<S>, rule: impl Into<Complement>) -> Result<Fes<S>> {
    let rule = rule.into();
    require_contained(a, b)?;
    let bound = a.max_bound().max(b.max_bound());
    let complex = a.complex();
    let mut cur = a.clone();
    // cells are stored by increasing dimension
    for cell in 0..complex.len() {
        let n = complex.cell(cell).dim();
        if n == 0 {
            continue;
        }
        let la = Local::new(a, cell, bound)?;
        la.require_zero_exact(cell)?;
        let lb = Local::new(b, cell, bound)?;
        let mut enlarged = la.clone();
        for k in (0..n).rev() {
            let fam = cur.boundary_families_with_bound(cell, k, bound);
            if fam.space.is_zero() {
                continue;
            }
            let lifted = match rule {
                Complement::Orthogonal(ip) => orthogonal_lifts(&cur, b, cell, k, &fam, &la, &lb, &enlarged, ip)?,
                Complement::Pivot => pivot_lifts(b, cell, k, &fam, &la, &lb, &enlarged)?,
            };
            if lifted.is_zero() {
                continue;
            }
            let space = la.spaces[k].sum(&lifted)?;
            enlarged.spaces[k] = space.clone();
            cur.replace(cell, k, FormSpace::from_subspace(la.shape, k, bound, space)?)?;
        }
        for k in 0..=n {
            let z = cur.boundary_restricted(cell, k).with_bound(bound)?;
            check(z.subspace() == &la.zero[k], cell, k, "trace-free space changed")?;
        }
    }
    Ok(cur)
}

/// Mixed extensions of `F ⊕ G`.
#[allow(clippy::too_many_arguments)]
fn orthogonal_lifts<S: Scalar>(
    cur: &Fes<S>,
    b: &Fes<S>,
    cell: usize,
    k: usize,
    fam: &BoundaryFamilies<S>,
    la: &Local<S>,
    lb: &Local<S>,
    enlarged: &Local<S>,
    ip: InnerProduct,
) -> Result<Subspace<S>> {
    let (f, g) = split_families(cur, cell, k, fam, la, ip)?;
    let complement = f.sum(&g)?;
    if complement.is_zero() {
        return Ok(complement);
    }
    let layout = &fam.layout;
    let w = mixed_space(enlarged, lb, k, ip);
    let tw = traces(b, cell, k, layout, w.vectors());
    let images = tw
        .iter()
        .map(|t| {
            let mut st = Stack::new();
            st.push(complement.residual(t), layout.total());
            st
        })
        .collect();
    let lifted = kernel_on(w.ambient_dim(), w.vectors(), images);
    if rank_of(traces(b, cell, k, layout, lifted.vectors())) != complement.dim() {
        return Err(FesError::NoExtension);
    }
    Ok(lifted)
}

/// Elements `w ∈ B^k(T)` with `dw ∈ Ã^{k+1}(T)` and traces in the families, kept while
/// their traces are new modulo `tr A^k(T)`.
fn pivot_lifts<S: Scalar>(
    b: &Fes<S>,
    cell: usize,
    k: usize,
    fam: &BoundaryFamilies<S>,
    la: &Local<S>,
    lb: &Local<S>,
    enlarged: &Local<S>,
) -> Result<Subspace<S>> {
    let layout = &fam.layout;
    let bk = lb.basis(k);
    let bk1 = lb.basis(k + 1);
    let members = lb.spaces[k].vectors();
    let tb = traces(b, cell, k, layout, members);
    let images = members
        .iter()
        .zip(&tb)
        .map(|(w, t)| {
            let mut st = Stack::new();
            st.push(enlarged.spaces[k + 1].residual(&bk.derivative(w)), bk1.dim());
            st.push(fam.space.residual(t), layout.total());
            st
        })
        .collect();
    let admissible = kernel_on(bk.dim(), members, images);
    let tr_a = traces(b, cell, k, layout, la.spaces[k].vectors());
    let base = Subspace::new(layout.total(), tr_a);
    let ta = traces(b, cell, k, layout, admissible.vectors());
    let picked = pick_new(base.vectors(), admissible.vectors(), &ta);
    if base.dim() + picked.len() != fam.space.dim() {
        return Err(FesError::NoExtension);
    }
    Ok(Subspace::new(bk.dim(), picked))
}

/// `F^k` and `G^k` of the boundary families, checked to complement `tr A^k(T)`.
fn split_families<S: Scalar>(
    cur: &Fes<S>,
    cell: usize,
    k: usize,
    fam: &BoundaryFamilies<S>,
    la: &Local<S>,
    ip: InnerProduct,
) -> Result<(Subspace<S>, Subspace<S>)> {
    let complex = cur.complex();
    let layout = &fam.layout;
    let next = cur.boundary_layout(cell, k + 1, la.bound);
    let tr_a = Subspace::new(layout.total(), traces(cur, cell, k, layout, la.spaces[k].vectors()));
    let tr_a1 = Subspace::new(next.total(), traces(cur, cell, k + 1, &next, la.spaces[k + 1].vectors()));
    let members = fam.space.vectors();
    let dfam: Vec<_> = members.iter().map(|u| layout.derivative(u, &next)).collect();
    let split = split_map(members, &dfam, next.total());
    let image = Subspace::new(next.total(), split.image.rows().iter().cloned());
    let reached = tr_a1.intersect(&image)?;

    let f_images = members
        .iter()
        .zip(&dfam)
        .map(|(u, du)| {
            let mut st = Stack::new();
            st.push(family_pairs(ip, complex, layout, u, tr_a.vectors()), tr_a.dim());
            st.push(tr_a1.residual(du), next.total());
            st
        })
        .collect();
    let f = kernel_on(layout.total(), members, f_images);
    let g_images = members
        .iter()
        .zip(&dfam)
        .map(|(u, du)| {
            let mut st = Stack::new();
            st.push(family_pairs(ip, complex, &next, du, reached.vectors()), reached.dim());
            st.push(family_pairs(ip, complex, layout, u, &split.kernel), split.kernel.len());
            st
        })
        .collect();
    let g = kernel_on(layout.total(), members, g_images);
    let parts = tr_a.dim() + f.dim() + g.dim();
    let all = tr_a.vectors().iter().chain(f.vectors()).chain(g.vectors()).cloned();
    if rank_of(all) != parts || parts != fam.space.dim() {
        return Err(FesError::ConstructionCheck {
            cell,
            degree: k,
            what: format!(
                "boundary families ({}) do not split as tr A ({}) + F ({}) + G ({})",
                fam.space.dim(),
                tr_a.dim(),
                f.dim(),
                g.dim()
            ),
        });
    }
    Ok((f, g))
}

/// The minimal compatible system containing `a`, built inside the compatible system `b`.
pub fn build_mcfes<S: Scalar>(a: &Fes<S>, b: &Fes<S>, rule: impl Into<Complement>) -> Result<Fes<S>> {
    let rule = rule.into();
    extend_to_compatible(&exactify(a, b, rule)?, b, rule)
}

/// [`build_mcfes`] for `P_rΛ•` on a reference cell inside [`default_ambient`].
pub fn build_mcfes_polynomial<S: Scalar>(cell: RefCell, r: usize, rule: impl Into<Complement>) -> Result<Fes<S>> {
    let a = Fes::reference(cell, SpaceFamily::Pr, r)?;
    build_mcfes(&a, &default_ambient(cell, r)?, rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{boundary_dims, compatibility_report, minimal_dims, small_pleasures_dim};
    use crate::Rational;

    type Q = Fes<Rational>;

    fn same_system(a: &Q, b: &Q) -> bool {
        (0..a.complex().len())
            .all(|c| a.spaces(c).iter().zip(b.spaces(c)).all(|(x, y)| x.same_span(y).unwrap()))
    }

    #[test]
    fn exact_systems_are_left_alone() {
        let cell = RefCell::simplex(2);
        let a = Q::reference(cell, SpaceFamily::PrMinus, 2).unwrap();
        let b = Q::reference(cell, SpaceFamily::PrMinus, 3).unwrap();
        let e = exactify(&a, &b, InnerProduct::Monomial).unwrap();
        assert!(same_system(&a, &e));
        let c = extend_to_compatible(&e, &b, InnerProduct::Monomial).unwrap();
        assert!(same_system(&a, &c));
        // the system inside itself
        assert!(same_system(&a, &build_mcfes(&a, &a, InnerProduct::L2).unwrap()));
    }

    #[test]
    fn exactify_tensor_polynomials() {
        let cell = RefCell::cube(2);
        for r in 1..=2 {
            let a = Q::reference(cell, SpaceFamily::Qr, r).unwrap();
            let b = default_ambient(cell, r).unwrap();
            let e = exactify(&a, &b, InnerProduct::Monomial).unwrap();
            let top = a.top_cell();
            assert_eq!(e.space(top, 1).dim() - a.space(top, 1).dim(), 3);
            for c in 0..a.complex().len() {
                let la = Local::new(&e, c, e.max_bound()).unwrap();
                assert!(la.zero_cohomology().unwrap().is_acyclic());
            }
        }
    }

    #[test]
    fn containment_is_required() {
        let cell = RefCell::cube(1);
        let a = Q::reference(cell, SpaceFamily::Pr, 3).unwrap();
        let b = default_ambient(cell, 1).unwrap();
        assert!(matches!(exactify(&a, &b, InnerProduct::Monomial), Err(FesError::NotContained { .. })));
    }

    #[test]
    fn minimal_system_on_the_square() {
        let cell = RefCell::cube(2);
        for r in 1..=3 {
            for rule in [InnerProduct::Monomial.into(), InnerProduct::L2.into(), Complement::Pivot] {
                let a = Q::reference(cell, SpaceFamily::Pr, r).unwrap();
                let m = build_mcfes_polynomial::<Rational>(cell, r, rule).unwrap();
                assert!(a.is_contained_in(&m).unwrap());
                assert!(m.is_element_system());
                let report = compatibility_report(&m).unwrap();
                assert!(report.is_compatible(), "r={r}");
                assert!(report.is_compatible_by_boundary());
                assert_eq!(boundary_dims(&m), minimal_dims(&a, false).unwrap());
                let top: Vec<usize> = (0..=2).map(|k| small_pleasures_dim(2, r, k)).collect();
                assert_eq!(boundary_dims(&m)[m.top_cell()], top);
            }
        }
    }

    #[test]
    fn minimal_system_on_the_triangle() {
        let cell = RefCell::simplex(2);
        for r in 1..=2 {
            for rule in [InnerProduct::Monomial.into(), Complement::Pivot] {
                let m = build_mcfes_polynomial::<Rational>(cell, r, rule).unwrap();
                assert!(compatibility_report(&m).unwrap().is_compatible());
                let full = Q::reference(cell, SpaceFamily::Pr, r).unwrap();
                assert_eq!(boundary_dims(&m), minimal_dims(&full, false).unwrap());
            }
        }
    }
}
