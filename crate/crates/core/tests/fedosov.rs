use starforge::algebra::Poly;
use starforge::fedosov::{build_r, r_residual, Fedosov, FedosovInput};
use starforge::moyal::{canonical_vars, moyal_product, ConstantPoisson};
use starforge::polydiff::monomials;

#[test]
fn flat_reproduces_moyal_through_degree_five() {
    let vars = canonical_vars(1);
    let mut fd = Fedosov::new(FedosovInput::flat(1), 4).unwrap();
    let pm = ConstantPoisson::standard(1);
    for u in monomials(&vars, 5) {
        for v in monomials(&vars, 5) {
            assert_eq!(fd.star(&u, &v).unwrap(), moyal_product(&u, &v, &pm, 4).unwrap());
        }
    }
}

#[test]
fn linear_connection_is_associative_at_order_three() {
    let p = Poly::var(canonical_vars(1), 1);
    let input = FedosovInput::from_symmetric(1, &[(0, 0, 0, p)], Vec::new()).unwrap();
    let r = build_r(&input, 9).unwrap();
    assert!(r_residual(&input, &r).unwrap().is_zero());
    let mut fd = Fedosov::new(input, 3).unwrap();
    let s = fd.star_product().unwrap();
    assert!(s.maurer_cartan_defect().is_zero());
    assert_eq!(s.associativity_orders(), (None, None));
}
