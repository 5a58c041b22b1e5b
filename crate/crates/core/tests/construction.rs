use banana::oracle::{matches_rebuild, naive_diagram, naive_windows, windows_diagram, Wave};
use banana::{diff, NodeLabel, Polarity, Sample, Subdiagram, Workspace};
use itertools::Itertools;

fn samples(values: &[f64]) -> Vec<Sample> {
    values.iter().enumerate().map(|(i, &v)| Sample { value: v, key: i as u64 + 1 }).collect()
}

fn check(values: &[f64]) {
    let mut ws = Workspace::new();
    let l = ws.build(values).unwrap();
    let v = ws.validate(l);
    assert!(v.is_empty(), "{values:?}: {}", v.iter().map(|v| v.to_string()).join("; "));
    let got = ws.diagram(l);
    let want = naive_diagram(&samples(values));
    assert_eq!(diff(&got, &want), 0, "{values:?}\n got {got:?}\nwant {want:?}");
    assert!(matches_rebuild(&ws, l));
}

#[test]
fn small_examples() {
    check(&[1.0, 2.0]);
    check(&[0.0, 3.0, 1.0, 4.0]);
    check(&[2.0, 0.0, 4.0, 1.0, 5.0]);
}

#[test]
fn frozen_diagrams() {
    let mut ws = Workspace::new();
    let l = ws.build(&[0.0, 3.0, 1.0, 4.0]).unwrap();
    let d = ws.diagram(l);
    assert_eq!(d.pairs(Subdiagram::Ordinary), vec![(1.0, 3.0)]);
    assert_eq!(d.pairs(Subdiagram::Relative), vec![(3.0, 1.0)]);
    assert_eq!(d.pairs(Subdiagram::Essential), vec![(0.0, 4.0)]);
    assert_eq!(d.arrows.len(), 1);
    let l = ws.build(&[2.0, 0.0, 4.0, 1.0, 5.0]).unwrap();
    let d = ws.diagram(l);
    assert_eq!(d.pairs(Subdiagram::Ordinary), vec![(1.0, 4.0)]);
    assert_eq!(d.pairs(Subdiagram::Relative), vec![(2.0, 0.0), (4.0, 1.0)]);
    assert_eq!(d.pairs(Subdiagram::Essential), vec![(0.0, 5.0)]);
    let l = ws.build(&[1.0, 2.0]).unwrap();
    let d = ws.diagram(l);
    assert_eq!(d.points.len(), 1);
    let _ = Polarity::Up;
}

#[test]
fn permutations_up_to_seven() {
    for n in 2..=7 {
        for p in (1..=n).permutations(n) {
            let v: Vec<f64> = p.iter().map(|&x| x as f64).collect();
            check(&v);
            let s = samples(&v);
            assert_eq!(diff(&naive_diagram(&s), &windows_diagram(&s)), 0, "{v:?}");
        }
    }
}

#[test]
fn spine_nodes_span_exactly_the_short_waves() {
    for n in 2..=7 {
        for p in (1..=n).permutations(n) {
            let v: Vec<f64> = p.iter().map(|&x| x as f64).collect();
            let mut ws = Workspace::new();
            let l = ws.build(&v).unwrap();
            let s = ws.samples(l);
            for w in naive_windows(&s) {
                if w.wave == Wave::Global {
                    continue;
                }
                let sig = ws.signature(l, w.sign);
                let on_spine = sig[&NodeLabel::Item(s[w.max_item].key)].1 != 0;
                let short = matches!(w.wave, Wave::ShortLeft | Wave::ShortRight);
                assert_eq!(on_spine, short, "{v:?} {w:?}");
            }
        }
    }
}
