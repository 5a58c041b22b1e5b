use banana::oracle::{matches_rebuild, naive_diagram, rebuild_mismatch};
use banana::{diff, ListId, Polarity, Workspace};
use itertools::Itertools;

fn dump(ws: &Workspace, l: ListId) -> String {
    format!("up:\n{}down:\n{}", ws.dump(l, Polarity::Up), ws.dump(l, Polarity::Down))
}

fn assert_canonical(ws: &Workspace, l: ListId, what: &str) {
    let v = ws.validate(l);
    assert!(v.is_empty(), "{what}: {}\n{}", v.iter().map(|x| x.to_string()).join("\n"), dump(ws, l));
    assert!(matches_rebuild(ws, l), "{what}: differs from rebuild: {:?}\n{}", rebuild_mismatch(ws, l), dump(ws, l));
    let d = naive_diagram(&ws.samples(l));
    assert_eq!(diff(&ws.diagram(l), &d), 0, "{what}: diagram differs from oracle");
}

#[test]
fn cut_every_permutation() {
    for n in 4..=7 {
        for perm in (0..n).permutations(n) {
            let values: Vec<f64> = perm.iter().map(|&x| x as f64).collect();
            for after in 2..=n - 2 {
                let mut ws = Workspace::new();
                let l = ws.build(&values).unwrap();
                let what = format!("{values:?} after {after}\n{}", dump(&ws, l));
                let (g, h, _out) = ws.cut(l, after).unwrap();
                assert_eq!(ws.values(g), values[..after], "{what}");
                assert_eq!(ws.values(h), values[after..], "{what}");
                assert_canonical(&ws, g, &format!("{what} left"));
                assert_canonical(&ws, h, &format!("{what} right"));
                let (f, _) = ws.concatenate(g, h).unwrap();
                assert_eq!(ws.values(f), values, "{what}");
                assert_canonical(&ws, f, &format!("{what} glued"));
            }
        }
    }
}

#[test]
fn glue_independent_lists() {
    for a in 1..=6 {
        for b in 1..=7 - a {
            for perm in (0..a + b).permutations(a + b) {
                let values: Vec<f64> = perm.iter().map(|&x| x as f64).collect();
                let mut ws = Workspace::new();
                let g = ws.create(&values[..a]).unwrap();
                let h = ws.create(&values[a..]).unwrap();
                let (f, _) = ws.concatenate(g, h).unwrap();
                let what = format!("{values:?} glued after {a}");
                assert_eq!(ws.values(f), values, "{what}");
                assert_canonical(&ws, f, &what);
            }
        }
    }
}

#[test]
fn random_cut_glue_and_edit_sequences() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for round in 0..200 {
        let mut ws = Workspace::new();
        let mut lists: Vec<ListId> = Vec::new();
        for _ in 0..3 {
            let n = rng.gen_range(1..14);
            let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0..12) as f64).collect();
            lists.push(ws.create(&values).unwrap());
        }
        for step in 0..30 {
            let i = rng.gen_range(0..lists.len());
            let l = lists[i];
            let len = ws.len(l);
            let what = format!("round {round} step {step}");
            match rng.gen_range(0..4) {
                0 if len >= 4 => {
                    let after = rng.gen_range(2..=len - 2);
                    let before = ws.values(l);
                    let (g, h, _) = ws.cut(l, after).unwrap();
                    assert_eq!([ws.values(g), ws.values(h)].concat(), before, "{what}");
                    lists.remove(i);
                    lists.extend([g, h]);
                    assert_canonical(&ws, g, &what);
                    assert_canonical(&ws, h, &what);
                }
                1 if lists.len() > 1 => {
                    let j = (i + rng.gen_range(1..lists.len())) % lists.len();
                    let (g, h) = (lists[i], lists[j]);
                    let expect = [ws.values(g), ws.values(h)].concat();
                    let (f, _) = ws.concatenate(g, h).unwrap();
                    lists.retain(|&x| x != g && x != h);
                    lists.push(f);
                    assert_eq!(ws.values(f), expect, "{what}");
                    assert_canonical(&ws, f, &what);
                }
                2 if len > 0 => {
                    let item = ws.item_at(l, rng.gen_range(1..=len)).unwrap();
                    ws.change_value(item, rng.gen_range(0..12) as f64 + 0.5).unwrap();
                    if ws.len(l) >= 2 {
                        assert_canonical(&ws, l, &what);
                    }
                }
                _ => {
                    ws.insert_item(l, rng.gen_range(0..=len), rng.gen_range(0..12) as f64).unwrap();
                    if ws.len(l) >= 2 {
                        assert_canonical(&ws, l, &what);
                    }
                }
            }
        }
    }
}

#[test]
fn cut_and_glue_small_example() {
    let mut ws = Workspace::new();
    let l = ws.build(&[0.0, 3.0, 1.0, 4.0]).unwrap();
    let (g, h, cut) = ws.cut(l, 2).unwrap();
    assert_eq!((ws.values(g), ws.values(h)), (vec![0.0, 3.0], vec![1.0, 4.0]));
    assert_eq!(ws.diagram(g).pairs(banana::Subdiagram::Essential), vec![(0.0, 3.0)]);
    assert_eq!(ws.diagram(h).pairs(banana::Subdiagram::Essential), vec![(1.0, 4.0)]);
    // Three points and one arrow leave, two points enter.
    assert_eq!(cut.k, 6);
    let (f, glue) = ws.concatenate(g, h).unwrap();
    assert_eq!(glue.k, 6);
    assert_eq!(ws.values(f), vec![0.0, 3.0, 1.0, 4.0]);
    assert_canonical(&ws, f, "glued");
}
