use banana::oracle::naive_diagram;
use banana::{diff, Subdiagram, Workspace};

#[test]
fn diff_of_identical_diagrams_is_zero() {
    let mut ws = Workspace::new();
    let l = ws.build(&[2.0, 0.0, 4.0, 1.0, 5.0]).unwrap();
    assert_eq!(diff(&ws.diagram(l), &ws.diagram(l)), 0);
}

#[test]
fn value_change_replaces_points_and_their_arrows() {
    // Separate workspaces give both lists the same item keys.
    let (mut wa, mut wb) = (Workspace::new(), Workspace::new());
    let a = wa.build(&[0.0, 3.0, 1.0, 4.0]).unwrap();
    let b = wb.build(&[0.0, 3.5, 1.0, 4.0]).unwrap();
    // The ordinary and relative points move, and so does the arrow that
    // names one of them.
    assert_eq!(diff(&wa.diagram(a), &wb.diagram(b)), 6);
    assert_eq!(diff(&naive_diagram(&wa.samples(a)), &naive_diagram(&wb.samples(b))), 6);
}

#[test]
fn monotone_list_has_only_the_essential_point() {
    let mut ws = Workspace::new();
    let l = ws.build(&[1.0, 2.0, 3.0, 7.0]).unwrap();
    let d = ws.diagram(l);
    assert_eq!(d.pairs(Subdiagram::Essential), vec![(1.0, 7.0)]);
    assert!(d.pairs(Subdiagram::Ordinary).is_empty() && d.pairs(Subdiagram::Relative).is_empty());
}

#[test]
fn json_document_roundtrips() {
    let mut ws = Workspace::new();
    let l = ws.build(&[2.0, 0.0, 4.0, 1.0, 5.0]).unwrap();
    let d = ws.diagram(l);
    let back: banana::Diagram = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
    assert_eq!(diff(&d, &back), 0);
}
