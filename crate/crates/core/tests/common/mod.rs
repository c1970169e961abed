#![allow(dead_code)]

use lineadm_core::{
    build_incidence, Arrangement, IncidenceStructure, Line, LocalSystem, Q,
};

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn arrangement(coeffs: &[(i64, i64, i64)]) -> (Arrangement, IncidenceStructure) {
    let lines = coeffs
        .iter()
        .map(|&(a, b, c)| Line::from_integers(a, b, c).unwrap())
        .collect();
    let arr = Arrangement::new(lines).unwrap();
    let inc = build_incidence(&arr).unwrap();
    (arr, inc)
}

pub fn system(values: &[Q]) -> LocalSystem {
    LocalSystem::from_values(values.to_vec()).unwrap()
}

/// Triangle L_0, L_1, L_2 with a fourth line through the joint of L_1 and
/// L_2 and one more line through each of the other two joints.
pub fn path_fixture() -> (Arrangement, IncidenceStructure) {
    arrangement(&[(0, 0, 1), (1, 0, 0), (0, 1, 0), (1, -1, 0), (1, 0, -1), (0, 1, -2)])
}

/// Quadrilateral x = 0, y = 0, x = z, y = z (lines 1 to 4) whose four
/// consecutive vertices are made triple by lines 5 to 8; line 0 is generic.
pub fn quadrilateral() -> (Arrangement, IncidenceStructure) {
    arrangement(&[
        (3, 5, -17),
        (1, 0, 0),
        (0, 1, 0),
        (1, 0, -1),
        (0, 1, -1),
        (2, 7, 0),
        (5, -3, -5),
        (11, -2, -9),
        (4, -13, 13),
    ])
}

/// Classes 1/2 on the quadrilateral, `extra` on line 5, 0 on lines 6 to 8,
/// line 0 balancing the total.
pub fn quadrilateral_system(extra: Q) -> LocalSystem {
    let mut v = vec![q(0, 1); 9];
    for l in 1..=4 {
        v[l] = q(1, 2);
    }
    v[5] = extra.clone();
    v[0] = (extra.ceil() - extra) % q(1, 1);
    system(&v)
}

/// Two triangles sharing the line y = 0 (lines 0 to 4), each vertex made
/// triple by one of lines 5 to 10.
pub fn two_triangles() -> (Arrangement, IncidenceStructure) {
    arrangement(&[
        (0, 1, 0),
        (1, 0, 0),
        (1, 1, -2),
        (1, 0, -5),
        (1, -1, -7),
        (1, 3, 0),
        (1, 5, -2),
        (7, 1, -2),
        (1, 11, -5),
        (2, -9, -14),
        (3, 13, 11),
    ])
}
