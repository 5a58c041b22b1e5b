use banana::oracle::{matches_rebuild, naive_diagram, rebuild_mismatch};
use banana::{diff, Polarity, Workspace};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn assert_canonical(ws: &Workspace, l: banana::ListId, what: &str) {
    let v = ws.validate(l);
    assert!(v.is_empty(), "{what}: {}\n{}", v.iter().map(|x| x.to_string()).join("\n"), dump(ws, l));
    assert!(matches_rebuild(ws, l), "{what}: differs from rebuild: {:?}\n{}", rebuild_mismatch(ws, l), dump(ws, l));
    if ws.len(l) >= 2 {
        let d = naive_diagram(&ws.samples(l));
        assert_eq!(diff(&ws.diagram(l), &d), 0, "{what}: diagram differs from oracle");
    }
}

fn dump(ws: &Workspace, l: banana::ListId) -> String {
    format!("up:\n{}down:\n{}", ws.dump(l, Polarity::Up), ws.dump(l, Polarity::Down))
}

#[test]
fn every_single_change_on_small_permutations() {
    for n in 3..=6 {
        for perm in (0..n).permutations(n) {
            let values: Vec<f64> = perm.iter().map(|&x| x as f64).collect();
            for pos in 1..=n {
                for t in 0..=n {
                    let target = t as f64 - 0.5;
                    let mut ws = Workspace::new();
                    let l = ws.build(&values).unwrap();
                    let item = ws.item_at(l, pos).unwrap();
                    ws.change_value(item, target).unwrap();
                    assert_canonical(&ws, l, &format!("{values:?} pos {pos} -> {target}"));
                }
            }
        }
    }
}

#[test]
fn random_edit_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for round in 0..300 {
        let n = rng.gen_range(2..12);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0..20) as f64).collect();
        let mut ws = Workspace::new();
        let l = ws.create(&values).unwrap();
        for step in 0..40 {
            let len = ws.len(l);
            let what = format!("round {round} step {step} {:?}", ws.values(l));
            match rng.gen_range(0..3) {
                0 if len > 0 => {
                    let item = ws.item_at(l, rng.gen_range(1..=len)).unwrap();
                    let v = rng.gen_range(0..20) as f64 + 0.5 * rng.gen_range(0..2) as f64;
                    ws.change_value(item, v).unwrap();
                }
                1 => {
                    let after = rng.gen_range(0..=len);
                    ws.insert_item(l, after, rng.gen_range(0..20) as f64).unwrap();
                }
                _ if len > 1 => {
                    let item = ws.item_at(l, rng.gen_range(1..=len)).unwrap();
                    ws.delete_item(item).unwrap();
                }
                _ => continue,
            }
            assert_canonical(&ws, l, &format!("{what} -> {:?}", ws.values(l)));
        }
    }
}
