//! Family constructors and the group-spec parser.

use std::sync::Arc;

use super::{direct_product, prime_power, Elem, Group};
use crate::error::{Error, Result};

pub fn trivial_group() -> Arc<Group> {
    Arc::new(Group::new_unchecked("1".into(), 1, vec![0], None))
}

pub fn cyclic(n: usize) -> Arc<Group> {
    assert!(n >= 1);
    let table = (0..n * n).map(|i| ((i / n + i % n) % n) as Elem).collect();
    let name = if n == 1 { "1".to_string() } else { format!("C{n}") };
    Arc::new(Group::new_unchecked(name, n, table, None))
}

fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    for _ in 0..e {
        r = r * b % m;
    }
    r
}

/// `C_n ⋊ C_m` with the generator of `C_m` acting by `y ↦ y^r`.
///
/// Element `y^b x^a` has id `b + n·a`.
pub fn semidirect(n: usize, m: usize, r: usize, name: impl Into<String>) -> Result<Arc<Group>> {
    if n == 0 || m == 0 || pow_mod(r as u64, m as u64, n as u64) != 1 % n as u64 {
        return Err(Error::Unsupported(format!("r^m must be 1 mod n (n={n}, m={m}, r={r})")));
    }
    let order = n * m;
    let rp: Vec<usize> = (0..m).map(|a| pow_mod(r as u64, a as u64, n as u64) as usize).collect();
    let mut table = Vec::with_capacity(order * order);
    for u in 0..order {
        let (b, a) = (u % n, u / n);
        for v in 0..order {
            let (d, c) = (v % n, v / n);
            let y = (b + d * rp[a]) % n;
            let x = (a + c) % m;
            table.push((y + n * x) as Elem);
        }
    }
    Ok(Arc::new(Group::new_unchecked(name.into(), order, table, None)))
}

/// `N ⋊ C_m` where the generator of `C_m` acts by the automorphism with image list `images`.
///
/// Element `(x, k)` has id `x + |N|·k`.
pub fn split_extension(n: &Group, images: &[Elem], m: usize, name: impl Into<String>) -> Result<Arc<Group>> {
    let no = n.order();
    let f = super::GroupMap::new(n, n, images.to_vec())?;
    if !f.is_injective() {
        return Err(Error::Unsupported("split extension needs an automorphism".into()));
    }
    // powers[k][x] = f^k(x)
    let mut powers: Vec<Vec<Elem>> = vec![(0..no as Elem).collect()];
    for k in 1..=m {
        let prev = &powers[k - 1];
        powers.push(prev.iter().map(|&x| f.apply(x)).collect());
    }
    if powers[m].iter().enumerate().any(|(i, &x)| x as usize != i) {
        return Err(Error::Unsupported(format!("automorphism order does not divide {m}")));
    }
    let order = no * m;
    let mut table = Vec::with_capacity(order * order);
    for u in 0..order {
        let (x1, k1) = (u % no, u / no);
        for v in 0..order {
            let (x2, k2) = (v % no, v / no);
            let x = n.mul(x1 as Elem, powers[k1][x2]) as usize;
            table.push((x + no * ((k1 + k2) % m)) as Elem);
        }
    }
    Group::from_table(name, order, table)
}

/// Dihedral group of order `n`.
pub fn dihedral(n: usize) -> Result<Arc<Group>> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Unsupported(format!("dihedral order must be even, got {n}")));
    }
    let h = n / 2;
    semidirect(h, 2, if h <= 2 { 1 } else { h - 1 }, format!("D{n}"))
}

/// Generalised quaternion group of order `n = 2^k ≥ 8`.
pub fn quaternion(n: usize) -> Result<Arc<Group>> {
    match prime_power(n) {
        Some((2, k)) if k >= 3 => {}
        _ => return Err(Error::Unsupported(format!("quaternion order must be 2^k >= 8, got {n}"))),
    }
    let m = n / 2;
    let mut table = Vec::with_capacity(n * n);
    // x^a y^b with id a + m·b, y x y⁻¹ = x⁻¹, y² = x^{m/2}.
    for u in 0..n {
        let (a, b) = (u % m, u / m);
        for v in 0..n {
            let (c, d) = (v % m, v / m);
            let mut e = if b == 0 { a + c } else { a + m - c };
            let mut f = b + d;
            if f == 2 {
                e += m / 2;
                f = 0;
            }
            table.push((e % m + m * f) as Elem);
        }
    }
    Ok(Arc::new(Group::new_unchecked(format!("Q{n}"), n, table, None)))
}

/// Semidihedral group of order `n = 2^k ≥ 16`.
pub fn semidihedral(n: usize) -> Result<Arc<Group>> {
    match prime_power(n) {
        Some((2, k)) if k >= 4 => {}
        _ => return Err(Error::Unsupported(format!("semidihedral order must be 2^k >= 16, got {n}"))),
    }
    semidirect(n / 2, 2, n / 4 - 1, format!("SD{n}"))
}

/// Modular group `M_{p^k} = ⟨x, y | x^p = y^{p^{k-1}} = 1, x y x⁻¹ = y^{1+p^{k-2}}⟩`.
pub fn modular(n: usize) -> Result<Arc<Group>> {
    let (p, k) = prime_power(n).ok_or_else(|| Error::Unsupported(format!("modular order {n} is not a prime power")))?;
    if k < 3 || (p == 2 && k < 4) {
        return Err(Error::Unsupported(format!("modular group needs order p^k with k >= 3 (k >= 4 for p = 2), got {n}")));
    }
    let p = p as usize;
    let big = n / p;
    semidirect(big, p, 1 + big / p, format!("M{n}"))
}

/// Heisenberg group of upper unitriangular 3×3 matrices over `F_p`.
pub fn heisenberg(p: usize) -> Arc<Group> {
    let n = p * p * p;
    let enc = |a: usize, b: usize, c: usize| (a + p * b + p * p * c) as Elem;
    let mut table = Vec::with_capacity(n * n);
    for u in 0..n {
        let (a, b, c) = (u % p, u / p % p, u / (p * p));
        for v in 0..n {
            let (a2, b2, c2) = (v % p, v / p % p, v / (p * p));
            table.push(enc((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p));
        }
    }
    Arc::new(Group::new_unchecked(format!("H{p}"), n, table, None))
}

/// The unique central element of order `p` when `Z(G)` has exactly one subgroup of order `p`.
fn central_socle_generator(g: &Group, p: u32) -> Result<Elem> {
    let z = g.center();
    let cands: Vec<Elem> = z.elems().iter().copied().filter(|&x| g.elem_order(x) == p).collect();
    match cands.first() {
        Some(&x) if g.closure(&[x]).order() == cands.len() + 1 => Ok(x),
        _ => Err(Error::Unsupported(format!("{} has no unique central subgroup of order {p}", g.name()))),
    }
}

/// Quotient of `G × H` by `⟨(z, w⁻¹)⟩`.
pub fn central_product(g: &Arc<Group>, z: Elem, h: &Arc<Group>, w: Elem, name: impl Into<String>) -> Result<Arc<Group>> {
    if z as usize >= g.order() || w as usize >= h.order() {
        return Err(Error::Precondition("central product element out of range".into()));
    }
    let zc = g.center();
    let wc = h.center();
    if !zc.contains(z) || !wc.contains(w) {
        return Err(Error::Precondition("central product elements must be central".into()));
    }
    let n = g.elem_order(z);
    if n != h.elem_order(w) || n < 2 {
        return Err(Error::Precondition("central product elements must have the same order > 1".into()));
    }
    let p = direct_product(g, h)?;
    let d = p.closure(&[Group::pair_code(z, h.inv(w), h.order())]);
    let (q, _) = p.quotient(&d, name)?;
    Ok(q)
}

/// Extraspecial group of order `p^{2l+1}`; `plus` selects the type.
pub fn extraspecial(p: usize, l: usize, plus: bool) -> Result<Arc<Group>> {
    if prime_power(p) != Some((p as u32, 1)) || l == 0 {
        return Err(Error::Unsupported(format!("extraspecial needs a prime p and l >= 1, got p={p}, l={l}")));
    }
    let sign = if plus { '+' } else { '-' };
    let name = format!("X({p},{l},{sign})");
    let (mut acc, rest) = match (p, plus) {
        (2, true) => (dihedral(8)?, l - 1),
        (2, false) => (quaternion(8)?, l - 1),
        (_, true) => (heisenberg(p), l - 1),
        (_, false) => (modular(p * p * p)?, l - 1),
    };
    let base = if p == 2 { dihedral(8)? } else { heisenberg(p) };
    for _ in 0..rest {
        let z = central_socle_generator(&acc, p as u32)?;
        let w = central_socle_generator(&base, p as u32)?;
        acc = central_product(&acc, z, &base, w, "cp")?;
    }
    Ok(acc.renamed(name))
}

// ---- parser ----

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(String),
    Times,
    LParen,
    RParen,
    Comma,
    At,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            '@' => {
                out.push(Tok::At);
                i += 1;
            }
            'x' | '×' if i + 1 >= cs.len() || !cs[i + 1].is_alphanumeric() => {
                out.push(Tok::Times);
                i += 1;
            }
            _ => {
                let start = i;
                if s[byte_offset(&cs, i)..].starts_with("table:") {
                    while i < cs.len() && !cs[i].is_whitespace() && cs[i] != ')' && cs[i] != ',' {
                        i += 1;
                    }
                } else {
                    while i < cs.len() && (cs[i].is_alphanumeric() || "-+_:^".contains(cs[i])) {
                        i += 1;
                    }
                }
                if i == start {
                    return Err(Error::Parse(format!("unexpected character {c:?}")));
                }
                out.push(Tok::Atom(cs[start..i].iter().collect()));
            }
        }
    }
    Ok(out)
}

fn byte_offset(cs: &[char], i: usize) -> usize {
    cs[..i].iter().map(|c| c.len_utf8()).sum()
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(ref x) if *x == t => Ok(()),
            other => Err(Error::Parse(format!("expected {t:?}, found {other:?}"))),
        }
    }

    fn number(&mut self) -> Result<usize> {
        match self.next() {
            Some(Tok::Atom(a)) => a.parse().map_err(|_| Error::Parse(format!("expected a number, found {a}"))),
            other => Err(Error::Parse(format!("expected a number, found {other:?}"))),
        }
    }

    fn expr(&mut self) -> Result<(Arc<Group>, String)> {
        let (mut g, mut name) = self.term()?;
        while self.peek() == Some(&Tok::Times) {
            self.next();
            let (h, hn) = self.term()?;
            g = direct_product(&g, &h)?;
            name = if hn.contains(" x ") { format!("{name} x ({hn})") } else { format!("{name} x {hn}") };
        }
        Ok((g.renamed(name.clone()), name))
    }

    fn element(&mut self, g: &Group) -> Result<Elem> {
        match self.next() {
            Some(Tok::Atom(a)) if a == "center-involution" => central_socle_generator(g, 2),
            Some(Tok::Atom(a)) => {
                let v: usize = a.parse().map_err(|_| Error::Parse(format!("bad element {a}")))?;
                if v >= g.order() {
                    return Err(Error::Parse(format!("element {v} out of range")));
                }
                Ok(v as Elem)
            }
            other => Err(Error::Parse(format!("expected an element, found {other:?}"))),
        }
    }

    fn term(&mut self) -> Result<(Arc<Group>, String)> {
        match self.next() {
            Some(Tok::LParen) => {
                let r = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(r)
            }
            Some(Tok::Atom(a)) if a == "cp" => {
                self.expect(Tok::LParen)?;
                let (g, gn) = self.expr()?;
                self.expect(Tok::At)?;
                let zs = self.peek().cloned();
                let z = self.element(&g)?;
                self.expect(Tok::Comma)?;
                let (h, hn) = self.expr()?;
                self.expect(Tok::At)?;
                let ws = self.peek().cloned();
                let w = self.element(&h)?;
                self.expect(Tok::RParen)?;
                let show = |t: Option<Tok>| match t {
                    Some(Tok::Atom(a)) => a,
                    _ => String::new(),
                };
                let name = format!("cp({gn}@{}, {hn}@{})", show(zs), show(ws));
                Ok((central_product(&g, z, &h, w, name.clone())?, name))
            }
            Some(Tok::Atom(a)) if a == "X" => {
                self.expect(Tok::LParen)?;
                let p = self.number()?;
                self.expect(Tok::Comma)?;
                let l = self.number()?;
                self.expect(Tok::Comma)?;
                let plus = match self.next() {
                    Some(Tok::Atom(s)) if s == "+" => true,
                    Some(Tok::Atom(s)) if s == "-" => false,
                    other => return Err(Error::Parse(format!("expected + or -, found {other:?}"))),
                };
                self.expect(Tok::RParen)?;
                let g = extraspecial(p, l, plus)?;
                let name = g.name().to_string();
                Ok((g, name))
            }
            Some(Tok::Atom(a)) if a.starts_with("table:") => {
                let path = &a["table:".len()..];
                let g = read_table(path)?;
                Ok((g, a))
            }
            Some(Tok::Atom(a)) => {
                let g = atom(&a)?;
                let name = g.name().to_string();
                Ok((g, name))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn atom(a: &str) -> Result<Arc<Group>> {
    if a == "1" {
        return Ok(trivial_group());
    }
    if a.contains([':', '^']) || a.ends_with("wrC2") {
        return crate::catalog::lookup(a).ok_or_else(|| Error::Parse(format!("unknown group {a}")));
    }
    let split = a.find(|c: char| c.is_ascii_digit()).ok_or_else(|| Error::Parse(format!("unknown group {a}")))?;
    let (head, num) = a.split_at(split);
    let n: usize = num.parse().map_err(|_| Error::Parse(format!("bad order in {a}")))?;
    if n == 0 {
        return Err(Error::Parse(format!("order must be positive in {a}")));
    }
    if n > super::HARD_ORDER_CAP {
        return Err(Error::CapExceeded { what: "group order", size: n, cap: super::HARD_ORDER_CAP });
    }
    match head {
        "C" => Ok(cyclic(n)),
        "D" => dihedral(n),
        "Q" => quaternion(n),
        "SD" => semidihedral(n),
        "M" => modular(n),
        _ => Err(Error::Parse(format!("unknown group family {head}"))),
    }
}

fn read_table(path: &str) -> Result<Arc<Group>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    parse_table_text(&text, &format!("table:{path}"))
}

pub(crate) fn parse_table_text(text: &str, name: &str) -> Result<Arc<Group>> {
    let mut nums = text.split_whitespace().map(|t| {
        t.parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad table entry {t:?}")))
    });
    let n = nums.next().ok_or_else(|| Error::Parse("empty table file".into()))??;
    if n == 0 || n > super::HARD_ORDER_CAP {
        return Err(Error::InvalidTable(format!("order {n} out of range")));
    }
    let vals = nums.collect::<Result<Vec<usize>>>()?;
    if vals.len() != n * n {
        return Err(Error::InvalidTable(format!("expected {} entries, found {}", n * n, vals.len())));
    }
    if vals.iter().any(|&v| v >= n) {
        return Err(Error::InvalidTable("entry out of range".into()));
    }
    Group::from_table(name, n, vals.into_iter().map(|v| v as Elem).collect())
}

/// Builds a group from a spec string such as `"C2 x Q8"` or `"cp(D8@center-involution, C4@2)"`.
pub fn build_group(spec: &str) -> Result<Arc<Group>> {
    let toks = lex(spec)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty group spec".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let (g, _) = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {spec:?}")));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn involutions(g: &Group) -> usize {
        g.orders().iter().filter(|&&o| o == 2).count()
    }

    #[test]
    fn cyclic_table() {
        let c4 = build_group("C4").unwrap();
        for i in 0..4u16 {
            for j in 0..4u16 {
                assert_eq!(c4.mul(i, j), (i + j) % 4);
            }
        }
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q8 = build_group("Q8").unwrap();
        assert_eq!(involutions(&q8), 1);
        assert_eq!(involutions(&build_group("Q16").unwrap()), 1);
        assert_eq!(involutions(&build_group("D8").unwrap()), 5);
    }

    #[test]
    fn modular_presentation() {
        let m = build_group("M16").unwrap();
        assert_eq!(m.order(), 16);
        // y = id 1 of order 8, x = id 8 of order 2, [x, y] = y^4.
        let (x, y) = (8, 1);
        assert_eq!(m.elem_order(y), 8);
        assert_eq!(m.elem_order(x), 2);
        assert_eq!(m.commutator(x, y), m.pow(y, 4));
        assert!(build_group("M8").is_err());
    }

    #[test]
    fn extraspecial_orders() {
        for (s, n) in [("X(2,1,+)", 8), ("X(2,1,-)", 8), ("X(3,1,+)", 27), ("X(3,1,-)", 27), ("X(2,2,+)", 32), ("X(2,2,-)", 32)] {
            let g = build_group(s).unwrap();
            assert_eq!(g.order(), n, "{s}");
            let z = g.center();
            assert_eq!(z.order(), if n % 3 == 0 { 3 } else { 2 });
            assert_eq!(g.derived(), z);
        }
        assert_eq!(build_group("X(3,1,+)").unwrap().exponent(), 3);
        assert_eq!(build_group("X(3,1,-)").unwrap().exponent(), 9);
        assert!(build_group("X(4,1,+)").is_err());
    }

    #[test]
    fn central_products() {
        let g = build_group("cp(D8@center-involution, C4@2)").unwrap();
        assert_eq!(g.order(), 16);
        assert_eq!(g.center().order(), 4);
        assert!(g.center().elems().iter().any(|&z| g.elem_order(z) == 4));
        let c = build_group("cp(C4@1, C4@1)").unwrap();
        assert_eq!(c.order(), 4);
        assert!(build_group("cp(C2 x C2@center-involution, C2@1)").is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(build_group("Z5"), Err(Error::Parse(_))));
        assert!(matches!(build_group("C4 x"), Err(Error::Parse(_))));
        assert!(matches!(build_group(""), Err(Error::Parse(_))));
        assert!(matches!(build_group("D7"), Err(Error::Unsupported(_))));
    }

    #[test]
    fn products_and_names() {
        let g = build_group("C2 x (C2 x C4)").unwrap();
        assert_eq!(g.name(), "C2 x (C2 x C4)");
        assert_eq!(g.order(), 16);
        assert_eq!(build_group("1 x C3").unwrap().order(), 3);
        assert_eq!(build_group("SD16").unwrap().order(), 16);
    }

    #[test]
    fn table_literal() {
        let dir = std::env::temp_dir().join(format!("fcore-table-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("c3.txt");
        std::fs::write(&p, "3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
        let g = build_group(&format!("table:{}", p.display())).unwrap();
        assert_eq!(g.id(), cyclic(3).id());
        std::fs::write(&p, "2\n0 1\n1 1\n").unwrap();
        assert!(matches!(build_group(&format!("table:{}", p.display())), Err(Error::InvalidTable(_))));
    }
}
