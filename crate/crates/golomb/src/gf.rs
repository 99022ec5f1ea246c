//! Table-driven arithmetic for small finite fields.
//!
//! The difference-set construction in [`crate::constructions`] works inside
//! GF(q³) for a prime power q. Orders stay tiny (q ≤ 32), so both the base
//! field GF(q) = GF(p^e) and its cubic extension are represented with
//! precomputed lookup tables rather than general-purpose polynomial
//! arithmetic. Elements of the base field are integer indices `0..q` encoding
//! polynomial coefficient digits base p; elements of the cubic extension are
//! coefficient triples over the base field.

/// Largest base-field order the table builder accepts. Keeps every table and
/// every multiplicative-group walk comfortably small.
pub(crate) const MAX_BASE_ORDER: u32 = 32;

/// Splits `n` into `(p, e)` with `p` prime and `p^e == n`. Returns `None` for
/// `n < 2` and for orders with more than one prime factor.
pub(crate) fn factor_prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    let mut m = n;
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

/// Distinct prime factors of `n`, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// --- polynomial helpers over the prime field F_p ---------------------------
//
// Coefficient vectors are little-endian (constant term first) and trimmed of
// trailing zeros; the zero polynomial is the empty vector.

fn poly_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `b`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    debug_assert_eq!(*b.last().expect("divisor must be nonzero"), 1);
    let db = b.len() - 1;
    let mut r = a.to_vec();
    while r.len() > db {
        let lead = *r.last().expect("length checked above");
        if lead != 0 {
            let shift = r.len() - 1 - db;
            for (i, &bc) in b.iter().take(db).enumerate() {
                let sub = (lead * bc) % p;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

/// True when the monic polynomial `f` (degree ≥ 2) has no monic divisor of
/// degree between 1 and deg(f)/2 — i.e. is irreducible over F_p.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let e = f.len() - 1;
    for d in 1..=e / 2 {
        let total = (p as u64).pow(d as u32);
        for code in 0..total {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible polynomial of degree `e` over F_p in the builder's
/// enumeration order (coefficient code ascending, constant term varying
/// fastest). Deterministic, which is all the callers need.
fn first_irreducible(p: u32, e: u32) -> Vec<u32> {
    let e = e as usize;
    if e == 1 {
        return vec![0, 1];
    }
    let total = (p as u64).pow(e as u32);
    for code in 0..total {
        let mut f = Vec::with_capacity(e + 1);
        let mut c = code;
        for _ in 0..e {
            f.push((c % p as u64) as u32);
            c /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("every degree admits an irreducible polynomial over a prime field")
}

// --- the base field GF(p^e) -------------------------------------------------

/// GF(p^e) with full addition/multiplication/negation/inversion tables.
/// Element `i` encodes the polynomial whose coefficients are the base-p
/// digits of `i`; in particular 0 is the additive and 1 the multiplicative
/// identity for every order.
pub(crate) struct BaseField {
    order: u32,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl BaseField {
    /// Builds the field of the given order, or `None` when the order is not
    /// a prime power or exceeds [`MAX_BASE_ORDER`].
    pub(crate) fn new(order: u32) -> Option<BaseField> {
        if order > MAX_BASE_ORDER {
            return None;
        }
        let (p, e) = factor_prime_power(order)?;
        let modulus = first_irreducible(p, e);
        let q = order as usize;

        let decode = |i: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(e as usize);
            let mut c = i;
            for _ in 0..e {
                v.push(c % p);
                c /= p;
            }
            poly_trim(&mut v);
            v
        };
        let encode = |poly: &[u32]| -> u16 {
            let mut idx = 0u32;
            for &c in poly.iter().rev() {
                idx = idx * p + c;
            }
            idx as u16
        };

        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        let mut neg = vec![0u16; q];
        for a in 0..order {
            let pa = decode(a);
            let mut na = pa.clone();
            for c in &mut na {
                *c = (p - *c) % p;
            }
            poly_trim(&mut na);
            neg[a as usize] = encode(&na);
            for b in 0..order {
                let pb = decode(b);
                let mut sum = vec![0u32; e as usize];
                for (i, s) in sum.iter_mut().enumerate() {
                    let x = pa.get(i).copied().unwrap_or(0);
                    let y = pb.get(i).copied().unwrap_or(0);
                    *s = (x + y) % p;
                }
                poly_trim(&mut sum);
                add[(a as usize) * q + b as usize] = encode(&sum);
                let prod = poly_rem(&poly_mul(&pa, &pb, p), &modulus, p);
                mul[(a as usize) * q + b as usize] = encode(&prod);
            }
        }
        let mut inv = vec![0u16; q];
        for a in 1..order {
            for b in 1..order {
                if mul[(a as usize) * q + b as usize] == 1 {
                    inv[a as usize] = b as u16;
                    break;
                }
            }
            debug_assert_ne!(inv[a as usize], 0, "every nonzero element has an inverse");
        }
        Some(BaseField {
            order,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub(crate) fn order(&self) -> u32 {
        self.order
    }

    pub(crate) fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.order as usize + b as usize]
    }

    pub(crate) fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.order as usize + b as usize]
    }

    pub(crate) fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    pub(crate) fn inv(&self, a: u16) -> u16 {
        debug_assert_ne!(a, 0, "zero has no inverse");
        self.inv[a as usize]
    }
}

// --- the cubic extension GF(q^3) --------------------------------------------

/// An element of the cubic extension: coefficients `[c0, c1, c2]` of
/// `c0 + c1·x + c2·x²` over the base field.
pub(crate) type CubicElt = [u16; 3];

/// GF(q³) built as base-field triples modulo the first root-free monic cubic
/// `x³ + c2·x² + c1·x + c0` over GF(q). A cubic is irreducible exactly when
/// it has no root in the coefficient field, so the search is a scan.
pub(crate) struct CubicField {
    base: BaseField,
    cubic: [u16; 3],
}

pub(crate) const CUBIC_ONE: CubicElt = [1, 0, 0];

impl CubicField {
    pub(crate) fn new(order: u32) -> Option<CubicField> {
        let base = BaseField::new(order)?;
        let q = order as u64;
        for code in 0..q * q * q {
            let cubic = [
                (code % q) as u16,
                ((code / q) % q) as u16,
                ((code / (q * q)) % q) as u16,
            ];
            let has_root = (0..order as u16).any(|x| {
                // x³ + c2·x² + c1·x + c0
                let x2 = base.mul(x, x);
                let x3 = base.mul(x2, x);
                let mut acc = base.add(x3, base.mul(cubic[2], x2));
                acc = base.add(acc, base.mul(cubic[1], x));
                base.add(acc, cubic[0]) == 0
            });
            if !has_root {
                return Some(CubicField { base, cubic });
            }
        }
        unreachable!("a root-free cubic exists over every finite field")
    }

    pub(crate) fn base(&self) -> &BaseField {
        &self.base
    }

    /// Number of elements, q³.
    pub(crate) fn order(&self) -> u64 {
        (self.base.order as u64).pow(3)
    }

    pub(crate) fn mul(&self, a: CubicElt, b: CubicElt) -> CubicElt {
        let bf = &self.base;
        let mut t = [0u16; 5];
        for i in 0..3 {
            if a[i] == 0 {
                continue;
            }
            for j in 0..3 {
                t[i + j] = bf.add(t[i + j], bf.mul(a[i], b[j]));
            }
        }
        // Rewrite x⁴ then x³ via x³ = −(c2·x² + c1·x + c0); the degree-4 step
        // can feed coefficient back into degree 3, so the order matters.
        for deg in (3..=4).rev() {
            let coef = t[deg];
            if coef == 0 {
                continue;
            }
            t[deg] = 0;
            for (k, &c) in self.cubic.iter().enumerate() {
                t[deg - 3 + k] = bf.add(t[deg - 3 + k], bf.neg(bf.mul(coef, c)));
            }
        }
        [t[0], t[1], t[2]]
    }

    pub(crate) fn pow(&self, a: CubicElt, mut n: u64) -> CubicElt {
        let mut result = CUBIC_ONE;
        let mut square = a;
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(result, square);
            }
            square = self.mul(square, square);
            n >>= 1;
        }
        result
    }

    /// A generator of the multiplicative group: the first nonzero element in
    /// coefficient-code order whose order is exactly q³ − 1, certified by
    /// checking `g^((q³−1)/r) ≠ 1` for every prime r dividing q³ − 1.
    pub(crate) fn primitive_element(&self) -> CubicElt {
        let q = self.base.order as u64;
        let group = self.order() - 1;
        let factors = prime_factors(group);
        for code in 1..self.order() {
            let candidate: CubicElt = [
                (code % q) as u16,
                ((code / q) % q) as u16,
                ((code / (q * q)) % q) as u16,
            ];
            if factors
                .iter()
                .all(|&r| self.pow(candidate, group / r) != CUBIC_ONE)
            {
                return candidate;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }
}
