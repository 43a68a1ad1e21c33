//! Small named groupoids used as fixtures: finite groups as one-object
//! groupoids, and the two-object example `E8` with its unclosed seven-element
//! precursor.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::groupoid::{GroupoidTable, RawTable, TableBuilder};

/// A one-object groupoid from a multiplication function. Element 0 must be
/// the identity and doubles as the object.
pub fn group_from_fn<F>(name: &str, elements: Vec<String>, mul: F) -> GroupoidTable
where
    F: Fn(usize, usize) -> usize,
{
    let n = elements.len();
    let mut inv = Vec::with_capacity(n);
    for g in 0..n {
        let gi = (0..n).find(|&h| mul(g, h) == 0).unwrap_or(g);
        inv.push(gi);
    }
    let mut comp = Vec::with_capacity(n * n);
    for g in 0..n {
        for h in 0..n {
            comp.push((g, h, mul(g, h)));
        }
    }
    GroupoidTable::from_raw(RawTable {
        name: name.to_string(),
        elements,
        objects: alloc::vec![0],
        dom: alloc::vec![0; n],
        rng: alloc::vec![0; n],
        inv,
        comp,
    })
    .expect("group tables are structurally sound")
}

/// Cyclic group `Zn` on `1, a, a2, …`.
pub fn cyclic(n: usize) -> GroupoidTable {
    assert!(n >= 1);
    let names = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "a".to_string(),
            _ => format!("a{i}"),
        })
        .collect();
    group_from_fn(&format!("Z{n}"), names, |g, h| (g + h) % n)
}

/// Group of permutations closed under composition; `perms[0]` must be the
/// identity. Product is `(στ)(i) = σ(τ(i))`.
pub fn permutation_group(name: &str, perms: Vec<Vec<usize>>) -> GroupoidTable {
    let names = perms
        .iter()
        .map(|p| p.iter().map(|i| char::from(b'1' + *i as u8)).collect())
        .collect();
    let find = |p: &[usize]| {
        perms
            .iter()
            .position(|q| q.as_slice() == p)
            .expect("permutation set must be closed")
    };
    group_from_fn(name, names, |g, h| {
        let prod: Vec<usize> = perms[h].iter().map(|&i| perms[g][i]).collect();
        find(&prod)
    })
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut cur, &mut out);
    out.sort();
    out
}

fn heap_permute(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, cur, out);
        if k.is_multiple_of(2) {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

/// Symmetric group `Sn` (`n ≤ 5`), elements in one-line notation, identity
/// first.
pub fn symmetric(n: usize) -> GroupoidTable {
    assert!((1..=5).contains(&n));
    permutation_group(&format!("S{n}"), all_permutations(n))
}

/// Dihedral group of order `2n`: rotations `r^i` then reflections `s r^i`.
pub fn dihedral(n: usize) -> GroupoidTable {
    assert!(n >= 1);
    let names = (0..2 * n)
        .map(|i| match (i / n, i % n) {
            (0, 0) => "1".to_string(),
            (0, k) => format!("r{k}"),
            (_, 0) => "s".to_string(),
            (_, k) => format!("sr{k}"),
        })
        .collect();
    // s^a r^i · s^b r^j = s^(a+b) r^(j + (-1)^b i)
    group_from_fn(&format!("D{n}"), names, |g, h| {
        let (a, i) = (g / n, g % n);
        let (b, j) = (h / n, h % n);
        let rot = if b == 0 { (i + j) % n } else { (j + n - i) % n };
        ((a + b) % 2) * n + rot
    })
}

/// Klein four-group on `1, a, b, c`.
pub fn klein() -> GroupoidTable {
    let names = ["1", "a", "b", "c"].iter().map(|s| s.to_string()).collect();
    group_from_fn("V4", names, |g, h| g ^ h)
}

/// The eight-element two-object groupoid with isotropy `Z2` at each object:
/// `u : x -> y`, `v : y -> x`, `a = vu` at `x`, `b = uv` at `y`.
pub fn e8() -> GroupoidTable {
    // Model: element = (d, r, s) in pair({x,y}) × Z2.
    let model: [(&str, usize, usize, usize); 8] = [
        ("x", 0, 0, 0),
        ("y", 1, 1, 0),
        ("a", 0, 0, 1),
        ("u", 0, 1, 0),
        ("v", 1, 0, 1),
        ("u-", 1, 0, 0),
        ("v-", 0, 1, 1),
        ("b", 1, 1, 1),
    ];
    let obj = ["x", "y"];
    let mut b = TableBuilder::new("E8");
    b.objects(obj);
    for &(id, d, r, _) in &model[2..] {
        b.arrow(id, obj[d], obj[r]);
    }
    b.inverse("a", "a").inverse("b", "b");
    b.inverse("u", "u-").inverse("v", "v-");
    let find = |d: usize, r: usize, s: usize| {
        model
            .iter()
            .find(|m| m.1 == d && m.2 == r && m.3 == s)
            .map(|m| m.0)
            .expect("model is complete")
    };
    for &(g, dg, rg, sg) in &model[2..] {
        for &(h, dh, rh, sh) in &model[2..] {
            if dg == rh {
                b.product(g, h, find(dh, rg, (sg + sh) % 2));
            }
        }
    }
    b.build().expect("E8 is well formed")
}

/// The seven-element table exactly as printed: `vu = a`, `a² = u⁻¹u = vv⁻¹ = x`,
/// `v⁻¹v = uu⁻¹ = y`. It is not closed (`uv` is composable but absent).
pub fn example_printed() -> TableBuilder {
    let mut b = TableBuilder::new("E7");
    b.objects(["x", "y"]);
    b.arrow("a", "x", "x")
        .arrow("u", "x", "y")
        .arrow("v", "y", "x")
        .arrow("u-", "y", "x")
        .arrow("v-", "x", "y");
    b.inverse("a", "a").inverse("u", "u-").inverse("v", "v-");
    b.product("v", "u", "a")
        .product("a", "a", "x")
        .product("u-", "u", "x")
        .product("v", "v-", "x")
        .product("v-", "v", "y")
        .product("u", "u-", "y");
    b
}
