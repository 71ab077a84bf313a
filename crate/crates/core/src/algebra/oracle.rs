//! Set-level composition of fibered bisets, used to cross-check the Mackey product.
//!
//! The fiber group is modelled as `ℤ/e` where `e` is the least common order of the
//! character values involved, so every realized biset is a finite set.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::space::{Label, LabelId, Space};
use crate::error::{Error, Result};
use crate::group::Elem;
use crate::phase::{common_order, Phase};

pub const ORACLE_ORDER_CAP: usize = 8;
const POINT_CAP: usize = 1 << 22;

/// `(A × G × H)/{(υ(u)⁻¹, u)}` with points `a·ncos + r`.
struct Realized {
    e: u32,
    ncos: usize,
    reps: Vec<Elem>,
    coset: Vec<u32>,
    offset: Vec<u32>,
    /// Product group multiplication on codes.
    mul: Box<dyn Fn(Elem, Elem) -> Elem>,
}

impl Realized {
    fn new(space: &Space, label: &Label, e: u32) -> Realized {
        let g = space.left().clone();
        let h = space.right().clone();
        let ho = h.order();
        let n = g.order() * ho;
        let mul = move |x: Elem, y: Elem| {
            let (x1, x2) = (x as usize / ho, x as usize % ho);
            let (y1, y2) = (y as usize / ho, y as usize % ho);
            (g.mul(x1 as Elem, y1 as Elem) as usize * ho + h.mul(x2 as Elem, y2 as Elem) as usize) as Elem
        };
        let mut coset = vec![u32::MAX; n];
        let mut offset = vec![0; n];
        let mut reps = Vec::new();
        for x in 0..n as Elem {
            if coset[x as usize] != u32::MAX {
                continue;
            }
            let r = reps.len() as u32;
            reps.push(x);
            for (&u, &v) in label.elems().iter().zip(label.values()) {
                let y = mul(x, u) as usize;
                coset[y] = r;
                offset[y] = v.num() * (e / v.den());
            }
        }
        Realized { e, ncos: reps.len(), reps, coset, offset, mul: Box::new(mul) }
    }

    fn len(&self) -> usize {
        self.e as usize * self.ncos
    }

    fn act(&self, w: Elem, p: usize) -> usize {
        let (a, r) = (p / self.ncos, p % self.ncos);
        let x = (self.mul)(w, self.reps[r]) as usize;
        ((a as u32 + self.offset[x]) % self.e) as usize * self.ncos + self.coset[x] as usize
    }

    fn shift(&self, b: u32, p: usize) -> usize {
        let (a, r) = (p / self.ncos, p % self.ncos);
        ((a as u32 + b) % self.e) as usize * self.ncos + r
    }
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] as usize != x {
            let p = self.0[x] as usize;
            self.0[x] = self.0[p];
            x = p;
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo as u32;
        }
    }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The transitive constituents of `X ×_{AH} Y` as label multiplicities in `out = (G, K)`.
pub fn tensor_oracle(s1: &Space, a: LabelId, s2: &Space, b: LabelId, out: &Arc<Space>) -> Result<Vec<(LabelId, i64)>> {
    let (g, h, k) = (s1.left().clone(), s1.right().clone(), s2.right().clone());
    if h.id() != s2.left().id() || out.key() != (g.id(), k.id()) {
        return Err(Error::Mismatch("oracle spaces do not compose".into()));
    }
    let biggest = g.order().max(h.order()).max(k.order());
    if biggest > ORACLE_ORDER_CAP {
        return Err(Error::CapExceeded { what: "oracle group order", size: biggest, cap: ORACLE_ORDER_CAP });
    }
    let (u, v) = (s1.label(a), s2.label(b));
    let e = common_order(u.values().iter().chain(v.values()));
    let x = Realized::new(s1, &u, e);
    let y = Realized::new(s2, &v, e);
    let ny = y.len();
    let total = x.len() * ny;
    if total > POINT_CAP {
        return Err(Error::CapExceeded { what: "oracle point set", size: total, cap: POINT_CAP });
    }
    let pt = |px: usize, py: usize| px * ny + py;

    // (a, h)·(x, y) = (x·(a⁻¹, h⁻¹), (a, h)·y)
    let mut orbits = UnionFind::new(total);
    let hgens = h.generators().to_vec();
    for px in 0..x.len() {
        for py in 0..ny {
            let p = pt(px, py);
            orbits.union(p, pt(x.shift(e - 1, px), y.shift(1, py)));
            for &t in &hgens {
                let xt = x.act(s1.code(0, t), px);
                let yt = y.act(s2.code(t, 0), py);
                orbits.union(p, pt(xt, yt));
            }
        }
    }

    let primes = prime_factors(e);
    let ggens = g.generators().to_vec();
    let kgens = k.generators().to_vec();
    let mut done = vec![false; total];
    let mut found: BTreeMap<LabelId, i64> = BTreeMap::new();
    for start in 0..total {
        if orbits.find(start) != start || done[start] {
            continue;
        }
        // the A × G × K orbit of this class, over roots
        let mut queue = vec![start];
        done[start] = true;
        let mut head = 0;
        while head < queue.len() {
            let p = queue[head];
            head += 1;
            let (px, py) = (p / ny, p % ny);
            let mut next = vec![pt(x.shift(1, px), py)];
            next.extend(ggens.iter().map(|&s| pt(x.act(s1.code(s, 0), px), py)));
            next.extend(kgens.iter().map(|&s| pt(px, y.act(s2.code(0, s), py))));
            for q in next {
                let r = orbits.find(q);
                if !done[r] {
                    done[r] = true;
                    queue.push(r);
                }
            }
        }
        let (px, py) = (start / ny, start % ny);
        let free = primes.iter().all(|&p| orbits.find(pt(x.shift(e / p, px), py)) != start);
        if !free {
            continue;
        }
        let mut fiber: BTreeMap<usize, u32> = BTreeMap::new();
        for c in 0..e {
            fiber.insert(orbits.find(pt(x.shift(c, px), py)), c);
        }
        let mut elems = Vec::new();
        let mut values = Vec::new();
        for gg in g.elements() {
            let qx = x.act(s1.code(gg, 0), px);
            for kk in k.elements() {
                let qy = y.act(s2.code(0, kk), py);
                if let Some(&c) = fiber.get(&orbits.find(pt(qx, qy))) {
                    elems.push(out.code(gg, kk));
                    values.push(Phase::new(c as i64, e));
                }
            }
        }
        *found.entry(out.intern(elems, values)).or_insert(0) += 1;
    }
    Ok(found.into_iter().collect())
}
