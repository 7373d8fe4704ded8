//! Fixtures shared by the benchmarks.

use qbelief::{DegreeScale, Enrichment, Frame, LabelScale, Model, Qbba};

/// The two Type-1 sources over `{A, B}` with Shafer's model and `n = 5`.
pub fn two_source_numeric() -> (Qbba, Qbba) {
    let frame = Frame::new(["A", "B"]).expect("valid frame");
    let scale = LabelScale::new(5).expect("valid scale");
    let build = |entries: [(&str, &str); 3]| {
        let mut q = Qbba::new(
            frame.clone(),
            Model::Shafer,
            scale.clone(),
            Enrichment::Numeric,
        );
        for (k, m) in entries {
            q.insert_text(k, m).expect("valid entry");
        }
        q
    };
    (
        build([("A", "L1(0.3)"), ("B", "L2(1.1)"), ("A|B", "L3(0.8)")]),
        build([("A", "L4(0.6)"), ("B", "L2(0.7)"), ("A|B", "L0(1)")]),
    )
}

/// A larger Type-2 problem on a four-atom frame under a hybrid model.
pub fn four_atom_qualitative() -> (Qbba, Qbba) {
    let frame = Frame::new(["A", "B", "C", "D"]).expect("valid frame");
    let model = Model::hybrid(vec![
        frame.parse("A&B").expect("valid"),
        frame.parse("C&D").expect("valid"),
    ])
    .expect("valid model");
    let scale = LabelScale::new(9).expect("valid scale");
    let degrees = Enrichment::Qualitative(DegreeScale::seven_point());
    let build = |entries: &[(&str, &str)]| {
        let mut q = Qbba::new(frame.clone(), model.clone(), scale.clone(), degrees.clone());
        for (k, m) in entries {
            q.insert_text(k, m).expect("valid entry");
        }
        q
    };
    (
        build(&[
            ("A", "L3(PS)"),
            ("B", "L2(NS)"),
            ("C|D", "L1(O)"),
            ("A&C", "L2(NM)"),
            ("A|B|C|D", "L2(O)"),
        ]),
        build(&[
            ("B", "L4(PM)"),
            ("C", "L3(NB)"),
            ("A|D", "L2(O)"),
            ("B&D", "L1(PS)"),
        ]),
    )
}
