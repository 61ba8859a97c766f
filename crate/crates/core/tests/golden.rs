//! Values frozen from the brute-force oracle in `tests/oracle/jet_oracle.py`.

use leafcoh::cohomology::{
    aeppli_dim, bott_chern_dim, canonical_map_rank, cohomology_dim, cohomology_dim_k, operator_matrix, OperatorTag,
};
use leafcoh::sequences::make_relative_complex;
use leafcoh::{parse_series, FoliatedMorphism, FoliationModel, FormBasis, Vars};
use serde_json::Value;

const ORACLE_BUDGET: u32 = 4;

fn golden() -> Value {
    serde_json::from_str(include_str!("oracle/golden.json")).unwrap()
}

fn model(m: usize, n: usize, f: &str) -> FoliationModel {
    FoliationModel::parse(m, n, ORACLE_BUDGET, f).unwrap()
}

fn num(v: &Value) -> usize {
    v.as_u64().unwrap() as usize
}

fn list(v: &Value) -> Vec<usize> {
    v.as_array().unwrap().iter().map(num).collect()
}

fn table(v: &Value) -> Vec<Vec<usize>> {
    v.as_array().unwrap().iter().map(list).collect()
}

#[test]
fn dbar_kernel_on_functions() {
    let g = golden();
    let s = model(1, 0, "1");
    let m = operator_matrix(OperatorTag::Dbar, &s, 0, 0, 2, 1).unwrap();
    let kernel = m.kernel_basis();
    assert_eq!(kernel.dim(), num(&g["dbar_kernel_dim_m1_budget2"]));
    let basis = FormBasis::new(s.vars(), 0, 0, 2);
    let mut support: Vec<Vec<u32>> = kernel
        .basis()
        .iter()
        .flat_map(|v| v.keys().copied().collect::<Vec<_>>())
        .map(|j| basis.elements()[j].mono.exponents().to_vec())
        .collect();
    support.sort();
    support.dedup();
    let expected: Vec<Vec<u32>> = g["dbar_kernel_m1_budget2"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as u32).collect())
        .collect();
    assert_eq!(support, expected);
}

#[test]
fn single_cells() {
    let g = golden();
    let s = model(1, 0, "1");
    let cases: [(&str, usize); 10] = [
        ("dolbeault_m1_f1_00_D3", cohomology_dim(&s, 0, 0, 3).unwrap().dim),
        ("dolbeault_m1_f1_01_D3", cohomology_dim(&s, 0, 1, 3).unwrap().dim),
        ("dolbeault_m1_f1_01_D2", cohomology_dim(&s, 0, 1, 2).unwrap().dim),
        ("dolbeault_m1_f1_11_D2", cohomology_dim(&s, 1, 1, 2).unwrap().dim),
        ("dolbeault_m1_fz1_01_D2", cohomology_dim(&model(1, 0, "z1"), 0, 1, 2).unwrap().dim),
        (
            "dolbeault_k1_m1_fzb1_01_D2",
            cohomology_dim_k(&model(1, 0, "zb1"), 0, 1, 2, 1).unwrap().dim,
        ),
        ("bott_chern_m1_f1_11_D1", bott_chern_dim(&s, 1, 1, 1).unwrap().dim),
        ("bott_chern_m1_f1_11_D2", bott_chern_dim(&s, 1, 1, 2).unwrap().dim),
        ("aeppli_m1_f1_10_D2", aeppli_dim(&s, 1, 0, 2).unwrap().dim),
        ("canonical_rank_m1_f1_11_D2", canonical_map_rank(&s, 1, 1, 2).unwrap().rank),
    ];
    for (key, got) in cases {
        assert_eq!(got, num(&g[key]), "{key}");
    }
}

#[test]
fn budget_sweeps() {
    let g = golden();
    let s = model(1, 0, "1");
    let bc: Vec<usize> = (0..4).map(|d| bott_chern_dim(&s, 0, 0, d).unwrap().dim).collect();
    let ae: Vec<usize> = (0..4).map(|d| aeppli_dim(&s, 0, 0, d).unwrap().dim).collect();
    assert_eq!(bc, list(&g["bott_chern_m1_f1_00"]));
    assert_eq!(ae, list(&g["aeppli_m1_f1_00"]));
}

fn grid<F: Fn(usize, usize) -> usize>(m: usize, cell: F) -> Vec<Vec<usize>> {
    (0..=m).map(|p| (0..=m).map(|q| cell(p, q)).collect()).collect()
}

#[test]
fn twisted_tables() {
    let g = golden();
    for (label, (m, n, f, d)) in [
        ("m1n0|z1|D2", (1, 0, "z1", 2)),
        ("m1n0|zb1^2|D2", (1, 0, "zb1^2", 2)),
        ("m1n1|1 + x1*zb1|D1", (1, 1, "1 + x1*zb1", 1)),
    ] {
        let s = model(m, n, f);
        let want = &g["twisted_tables"][label];
        assert_eq!(grid(m, |p, q| cohomology_dim(&s, p, q, d).unwrap().dim), table(&want["dolbeault"]), "{label}");
        assert_eq!(grid(m, |p, q| bott_chern_dim(&s, p, q, d).unwrap().dim), table(&want["bott_chern"]), "{label}");
        assert_eq!(grid(m, |p, q| aeppli_dim(&s, p, q, d).unwrap().dim), table(&want["aeppli"]), "{label}");
        assert_eq!(
            grid(m, |p, q| canonical_map_rank(&s, p, q, d).unwrap().rank),
            table(&want["canonical_rank"]),
            "{label}"
        );
    }
}

#[test]
fn unit_twist_tables() {
    let g = golden();
    for (key, want) in g["unit_twist_tables"].as_object().unwrap() {
        let (name, f) = key.split_once('|').unwrap();
        let (m, d) = match name {
            "m1n0D3" => (1, 3),
            "m2n0D2" => (2, 2),
            other => panic!("unknown scene {other}"),
        };
        let s = model(m, 0, f);
        assert_eq!(grid(m, |p, q| cohomology_dim(&s, p, q, d).unwrap().dim), table(want), "{key}");
    }
}

#[test]
fn relative_complexes() {
    let g = golden();
    let v = Vars::new(1, 0);
    for (key, z, fp, p) in [
        ("relative_id_f1_p0_D2", "z1", "1", 0),
        ("relative_zero_f1_p0_D2", "0", "1", 0),
        ("relative_z2_f1_p0_D2", "z1^2", "1", 0),
        ("relative_z2_fz_p0_D2", "z1^2", "z1", 0),
        ("relative_z2_fz_p1_D2", "z1^2", "z1", 1),
    ] {
        let mu = FoliatedMorphism::new(v, v, vec![parse_series(z, v, ORACLE_BUDGET).unwrap()], vec![]).unwrap();
        let fp = parse_series(fp, v, ORACLE_BUDGET).unwrap();
        let rel = make_relative_complex(&mu, &fp, p, 2).unwrap();
        let want = &g[key];
        assert_eq!(rel.budgets.iter().map(|&b| b as usize).collect::<Vec<_>>(), list(&want["budgets"]), "{key}");
        assert_eq!(rel.complex().betti().unwrap(), list(&want["relative"]), "{key}");
        assert_eq!(rel.ses.left.betti().unwrap(), list(&want["source_shifted"]), "{key}");
        assert_eq!(rel.ses.right.betti().unwrap(), list(&want["target"]), "{key}");
    }
}
