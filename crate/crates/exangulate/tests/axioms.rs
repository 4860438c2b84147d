use exangulate::fixtures;
use exangulate::verifier::{
    axiom_clause_pairs, check_dg_axioms, ordinary_axioms, realization_check, Certificates,
    SequenceCatalog,
};

#[test]
fn degree_zero_presentations_satisfy_both_axiom_lists() {
    for (p, label) in [
        (fixtures::semisimple_point(), "semisimple point"),
        (fixtures::two_vertex_quiver(), "two vertex quiver"),
    ] {
        let certs = Certificates::default();
        let cat = SequenceCatalog::enumerate(&p, 1, 2).unwrap();
        let dg = check_dg_axioms(&p, &cat, &certs).unwrap();
        let ord = ordinary_axioms(&p, &cat, &certs).unwrap();
        for (dname, oname) in axiom_clause_pairs() {
            let dc = dg.clause(dname).unwrap_or_else(|| panic!("{label}: missing {dname}"));
            let oc = ord.clause(oname).unwrap_or_else(|| panic!("{label}: missing {oname}"));
            assert_eq!(
                dc.verdict, oc.verdict,
                "{label}: {dname} vs {oname}\n{dg}\n{ord}"
            );
        }
        assert!(dg.all_passed(), "{label}:\n{dg}");
        assert!(ord.all_passed(), "{label}:\n{ord}");
    }
}

#[test]
fn dual_numbers_realize_their_degree_zero_structure() {
    let p = fixtures::dual_numbers(2);
    let certs = Certificates::default();
    let cat = SequenceCatalog::enumerate(&p, 2, 2).unwrap();
    let report = realization_check(&p, &cat, &certs).unwrap();
    assert!(report.all_passed(), "{report}");
}

#[test]
fn dual_numbers_satisfy_the_dg_axioms() {
    let p = fixtures::dual_numbers(2);
    let certs = Certificates::default();
    let cat = SequenceCatalog::enumerate(&p, 2, 2).unwrap();
    let report = check_dg_axioms(&p, &cat, &certs).unwrap();
    assert!(report.all_passed(), "{report}");
}
