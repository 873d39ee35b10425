use minfes::cells::{CellComplex, Fes, RefCell, SpaceFamily};
use minfes::construct::{build_mcfes, build_mcfes_polynomial, build_tnt, default_ambient, verify_tnt, Complement};
use minfes::homology::{boundary_dims, compatibility_report, minimal_dims, small_pleasures_dim};
use minfes::{QFes, Rational};

#[test]
fn tensor_systems_up_to_three_dimensions() {
    for n in 1..=3 {
        for r in 1..=3 {
            let c = verify_tnt(n, r).unwrap();
            assert!(c.holds(), "{c:?}");
        }
    }
}

#[test]
fn tensor_systems_are_the_minimal_ones() {
    for (n, r) in [(2, 1), (2, 2), (3, 1)] {
        let cell = RefCell::cube(n);
        let q = QFes::reference(cell, SpaceFamily::Qr, r).unwrap();
        let tnt = build_tnt::<Rational>(n, r).unwrap();
        assert!(q.is_contained_in(&tnt).unwrap());
        assert_eq!(boundary_dims(&tnt), minimal_dims(&q, false).unwrap());
        let built = build_mcfes(&q, &default_ambient(cell, r).unwrap(), Complement::Pivot).unwrap();
        assert_eq!(boundary_dims(&built), boundary_dims(&tnt));
    }
}

#[test]
fn minimal_systems_on_cubes() {
    for n in 1..=3 {
        for r in 1..=5 {
            let cell = RefCell::cube(n);
            let a = QFes::reference(cell, SpaceFamily::Pr, r).unwrap();
            let m = build_mcfes_polynomial::<Rational>(cell, r, Complement::Pivot).unwrap();
            assert!(a.is_contained_in(&m).unwrap());
            assert!(m.is_element_system());
            assert!(compatibility_report(&m).unwrap().is_compatible(), "n={n} r={r}");
            let dims = boundary_dims(&m);
            assert_eq!(dims, minimal_dims(&a, false).unwrap());
            let top: Vec<usize> = (0..=n).map(|k| small_pleasures_dim(n, r, k)).collect();
            assert_eq!(dims[m.top_cell()], top, "n={n} r={r}");
        }
    }
}

#[test]
fn minimal_systems_on_simplices() {
    for n in 1..=3 {
        for r in 1..=3 {
            let cell = RefCell::simplex(n);
            let a = QFes::reference(cell, SpaceFamily::Pr, r).unwrap();
            let m = build_mcfes_polynomial::<Rational>(cell, r, Complement::Pivot).unwrap();
            assert!(compatibility_report(&m).unwrap().is_compatible(), "n={n} r={r}");
            assert_eq!(boundary_dims(&m), minimal_dims(&a, false).unwrap());
        }
    }
}

fn meshes() -> Vec<CellComplex<Rational>> {
    let two = |cell: RefCell, a: Vec<usize>, b: Vec<usize>| CellComplex::from_top_cells(&[(cell, a), (cell, b)]).unwrap();
    vec![
        two(RefCell::cube(1), vec![0, 1], vec![1, 2]),
        two(RefCell::cube(2), vec![0, 1, 2, 3], vec![1, 4, 3, 5]),
        two(RefCell::cube(3), (0..8).collect(), vec![1, 8, 3, 9, 5, 10, 7, 11]),
        two(RefCell::simplex(2), vec![0, 1, 2], vec![1, 2, 3]),
    ]
}

/// The global space has dimension `Σ_T dim A^k_0(T)` in every degree where all cells extend.
#[test]
fn global_dimension_counts_trace_free_spaces() {
    let mut saw_failure = false;
    for mesh in meshes() {
        let cube = mesh.cell(mesh.len() - 1).shape.is_cube();
        let mut families = vec![(SpaceFamily::Pr, 1), (SpaceFamily::Pr, 2)];
        if cube {
            families.extend([(SpaceFamily::Qr, 1), (SpaceFamily::QrMinus, 2)]);
        } else {
            families.push((SpaceFamily::PrMinus, 2));
        }
        for (family, r) in families {
            let fes = Fes::polynomial(mesh.clone(), family, r).unwrap();
            for k in 0..=mesh.dim() {
                let extends = (0..mesh.len()).all(|c| mesh.cell(c).dim() < k || fes.has_extensions(c, k));
                let equal = fes.global_space_dim(k) == fes.boundary_dim_sum(k);
                assert_eq!(extends, equal, "{family:?} r={r} k={k}");
                saw_failure |= !extends;
            }
        }
    }
    assert!(saw_failure);
}
