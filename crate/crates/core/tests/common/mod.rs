#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use crfactor::construct::{
    direct_sum_groups, extraspecial_normalizer, gamma_l_1, general_linear, gu_3_2, tower,
    unitriangular, upper_triangular,
};
use crfactor::gf::Field;
use crfactor::grp::MatrixGroup;
use crfactor::matfq::Matrix;

pub fn field(p: u32, f: u32) -> Arc<Field> {
    Arc::new(Field::new(p, f, None).unwrap())
}

/// Order by breadth-first closure over the generators, giving up past `limit`.
pub fn brute_force_order(g: &MatrixGroup, limit: usize) -> Option<u128> {
    let f = g.field();
    let id = Matrix::identity(g.dim());
    let mut seen: HashSet<Matrix> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for s in g.generators() {
            let y = x.mul(f, s);
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    Some(seen.len() as u128)
}

/// Small groups with known structure, all of order at most 10^4.
pub fn corpus() -> Vec<(&'static str, MatrixGroup)> {
    let (f2, f3, f4, f5) = (field(2, 1), field(3, 1), field(2, 2), field(5, 1));
    let gl22 = general_linear(f2.clone(), 2).unwrap();
    vec![
        ("gl-2-2", gl22.clone()),
        ("gl-3-2", general_linear(f2.clone(), 3).unwrap()),
        ("gl-2-3", general_linear(f3.clone(), 2).unwrap()),
        ("gl-2-4", general_linear(f4.clone(), 2).unwrap()),
        ("gl-2-5", general_linear(f5, 2).unwrap()),
        ("upper-2-3", upper_triangular(f3.clone(), 2).unwrap()),
        ("upper-3-2", upper_triangular(f2.clone(), 3).unwrap()),
        ("unitriangular-3-3", unitriangular(f3, 3).unwrap()),
        ("gammaL1-p2", gamma_l_1(2).unwrap()),
        ("gammaL1-p3", gamma_l_1(3).unwrap()),
        (
            "gammaL1-p2-L2",
            tower(&gamma_l_1(2).unwrap(), 2, 2).unwrap(),
        ),
        ("extraspecial-p3", extraspecial_normalizer(3).unwrap()),
        ("extraspecial-p5", extraspecial_normalizer(5).unwrap()),
        ("gu32", gu_3_2(f4).unwrap()),
        ("gl-2-2-squared", direct_sum_groups(&gl22, &gl22).unwrap()),
        ("gl-1-343", general_linear(field(7, 3), 1).unwrap()),
    ]
}
