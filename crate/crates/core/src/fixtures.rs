//! Small algebras used throughout the tests, the CLI examples and the demo.

use crate::algebra::{parse_algebra, FiniteAlgebra};

pub const Z2_SRC: &str = "\
# additive group of integers mod 2
algebra Z2
carrier: 0 1
op add/2:
0 1
1 0
op neg/1:
0 1
op e/0:
0
";

pub const Z3_SRC: &str = "\
# additive group of integers mod 3
algebra Z3
carrier: 0 1 2
op add/2:
0 1 2
1 2 0
2 0 1
op neg/1:
0 2 1
op e/0:
0
";

/// Z3 again, with labels p=1, q=0, r=2 declared in a different order.
pub const Z3_RELABELED_SRC: &str = "\
algebra Z3r
carrier: p q r
op add/2:
r p q
p q r
q r p
op neg/1:
r q p
op e/0:
q
";

pub const L2_SRC: &str = "\
# two-element meet-semilattice with both bounds named
algebra L2
carrier: 0 1
op meet/2:
0 0
0 1
op zero/0:
0
op one/0:
1
";

fn parse(src: &str) -> FiniteAlgebra {
    parse_algebra(src).expect("built-in fixture parses")
}

pub fn z2() -> FiniteAlgebra {
    parse(Z2_SRC)
}

pub fn z3() -> FiniteAlgebra {
    parse(Z3_SRC)
}

pub fn z3_relabeled() -> FiniteAlgebra {
    parse(Z3_RELABELED_SRC)
}

pub fn l2() -> FiniteAlgebra {
    parse(L2_SRC)
}

/// The Klein four-group as `Z2 × Z2`.
pub fn z2_squared() -> FiniteAlgebra {
    z2().direct_power(2).expect("4 elements")
}

/// Z2, Z3, L2 and Z2^2.
pub fn standard() -> Vec<FiniteAlgebra> {
    vec![z2(), z3(), l2(), z2_squared()]
}

/// The standard fixtures plus the relabeled copy of Z3.
pub fn library() -> Vec<FiniteAlgebra> {
    let mut all = standard();
    all.push(z3_relabeled());
    all
}

pub fn by_name(name: &str) -> Option<FiniteAlgebra> {
    library().into_iter().find(|h| h.name() == name)
}
