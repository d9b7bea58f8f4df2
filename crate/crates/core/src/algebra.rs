//! Exact arithmetic in GF(p^k) and univariate polynomials over it.
//!
//! Elements are stored as integer encodings of their coefficient vector in
//! the modulus basis, little-endian base p (so the prime subfield occupies
//! encodings `0..p`). Fields up to 2^16 elements carry log/antilog tables;
//! larger fields fall back to direct modular polynomial arithmetic.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Default cap on the number of field elements accepted by [`Field::new`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 32;
/// Fields at or below this size get log/antilog tables.
const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Clone, Debug)]
struct Tables {
    /// exp[i] = encoding of g^i for the canonical primitive g, doubled so
    /// that exp[log a + log b] never wraps.
    exp: Vec<u64>,
    /// log[enc] = i with g^i = enc; log[0] unused.
    log: Vec<u32>,
}

/// An immutable descriptor of GF(p^k): modulus, canonical primitive element,
/// and (for small fields) multiplication tables.
#[derive(Clone, Debug)]
pub struct Field {
    p: u64,
    k: u32,
    q: u64,
    /// Monic irreducible modulus over GF(p), constant term first, length k+1.
    modulus: Vec<u64>,
    /// Prime factors of q - 1 (deduplicated).
    unit_factors: Vec<u64>,
    /// Smallest primitive element in encoding order.
    primitive: u64,
    tables: Option<Tables>,
    /// Structural fingerprint used for cheap mismatch checks.
    fingerprint: u64,
}

/// A field element paired with the fingerprint of its field, for the
/// checked public arithmetic entry points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldElement {
    pub enc: u64,
    pub field: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while (d as u128) * (d as u128) <= n as u128 {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

impl Field {
    /// GF(p^k) with the canonical modulus, default size cap.
    pub fn new(p: u64, k: u32) -> Result<Field> {
        Field::with_cap(p, k, DEFAULT_FIELD_CAP)
    }

    /// GF(p^k) with an explicit size cap.
    ///
    /// The modulus is the first monic irreducible of degree k over GF(p) in
    /// increasing order of the integer encoding of its non-leading
    /// coefficients, which makes construction deterministic across runs.
    pub fn with_cap(p: u64, k: u32, cap: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        let q128 = (p as u128).checked_pow(k).ok_or(Error::FieldTooLarge(u128::MAX, cap))?;
        if q128 > cap as u128 {
            return Err(Error::FieldTooLarge(q128, cap));
        }
        let q = q128 as u64;

        let modulus = if k == 1 {
            vec![0, 1] // unused by arithmetic; kept for uniform reporting
        } else {
            find_irreducible(p, k)
        };

        let mut field = Field {
            p,
            k,
            q,
            modulus,
            unit_factors: prime_factors(q - 1),
            primitive: 0,
            tables: None,
            fingerprint: 0,
        };
        field.fingerprint = field.compute_fingerprint();
        field.primitive = field.find_primitive();
        if q <= TABLE_LIMIT {
            field.build_tables();
        }
        Ok(field)
    }

    /// Cached construction; fields are immutable so sharing is safe.
    pub fn cached(p: u64, k: u32, cap: u64) -> Result<Arc<Field>> {
        type Cache = Mutex<HashMap<(u64, u32), Arc<Field>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&(p, k)) {
            return Ok(f.clone());
        }
        let f = Arc::new(Field::with_cap(p, k, cap)?);
        cache.lock().unwrap().insert((p, k), f.clone());
        Ok(f)
    }

    fn compute_fingerprint(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        let mut mix = |v: u64| {
            h ^= v;
            h = h.wrapping_mul(0x1000_0000_01b3);
        };
        mix(self.p);
        mix(self.k as u64);
        for &c in &self.modulus {
            mix(c);
        }
        h
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Smallest primitive element in the canonical encoding order.
    pub fn primitive(&self) -> u64 {
        self.primitive
    }

    pub fn element(&self, enc: u64) -> FieldElement {
        debug_assert!(enc < self.q);
        FieldElement { enc, field: self.fingerprint }
    }

    fn decode(&self, enc: u64) -> Vec<u64> {
        let mut digits = vec![0u64; self.k as usize];
        let mut e = enc;
        for d in digits.iter_mut() {
            *d = e % self.p;
            e /= self.p;
        }
        digits
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        let mut e = 0u64;
        for &d in digits.iter().rev() {
            e = e * self.p + d;
        }
        e
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        if self.p == 2 {
            return a ^ b;
        }
        let (da, db) = (self.decode(a), self.decode(b));
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.k == 1 {
            return (self.p - a % self.p) % self.p;
        }
        if self.p == 2 {
            return a;
        }
        let da = self.decode(a);
        let neg: Vec<u64> = da.iter().map(|x| (self.p - x) % self.p).collect();
        self.encode(&neg)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let la = t.log[a as usize] as usize;
            let lb = t.log[b as usize] as usize;
            return t.exp[la + lb];
        }
        self.mul_raw(a, b)
    }

    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        let da = self.decode(a);
        let db = self.decode(b);
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce modulo the monic modulus
        for i in (k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let m = self.modulus[j];
                if m != 0 {
                    let idx = i - k + j;
                    let red = c * m % self.p;
                    prod[idx] = (prod[idx] + self.p - red) % self.p;
                }
            }
        }
        prod.truncate(k);
        self.encode(&prod)
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.tables {
            let la = t.log[a as usize] as usize;
            let n = (self.q - 1) as usize;
            return Ok(t.exp[(n - la) % n]);
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let la = t.log[a as usize] as u64;
            return t.exp[((la as u128 * (e as u128 % n as u128)) % n as u128) as usize];
        }
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn find_primitive(&self) -> u64 {
        if self.q == 2 {
            return 1;
        }
        'outer: for cand in 2..self.q {
            for &r in &self.unit_factors {
                if self.pow_notable(cand, (self.q - 1) / r) == 1 {
                    continue 'outer;
                }
            }
            return cand;
        }
        unreachable!("every finite field has a primitive element")
    }

    /// pow before tables exist (used during construction).
    fn pow_notable(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = if self.k == 1 {
                    ((acc as u128 * base as u128) % self.p as u128) as u64
                } else {
                    self.mul_raw(acc, base)
                };
            }
            base = if self.k == 1 {
                ((base as u128 * base as u128) % self.p as u128) as u64
            } else {
                self.mul_raw(base, base)
            };
            e >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u64; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut acc = 1u64;
        for (i, slot) in exp.iter_mut().take(n).enumerate() {
            *slot = acc;
            log[acc as usize] = i as u32;
            acc = if self.k == 1 {
                ((acc as u128 * self.primitive as u128) % self.p as u128) as u64
            } else {
                self.mul_raw(acc, self.primitive)
            };
        }
        debug_assert_eq!(acc, 1, "primitive element order mismatch");
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        self.tables = Some(Tables { exp, log });
    }

    /// Multiplicative order of a nonzero element; divides q - 1.
    pub fn element_order(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        let mut order = self.q - 1;
        for &r in &self.unit_factors {
            while order.is_multiple_of(r) && self.pow(a, order / r) == 1 {
                order /= r;
            }
        }
        Ok(order)
    }

    /// Deterministic primitive n-th root of unity: g^((q-1)/n) for the
    /// canonical primitive g.
    pub fn nth_root_of_unity(&self, n: u64) -> Result<u64> {
        if n == 0 || !(self.q - 1).is_multiple_of(n) {
            return Err(Error::NoSuchRoot(n, self.q - 1));
        }
        Ok(self.pow(self.primitive, (self.q - 1) / n))
    }

    /// Discrete log base the canonical primitive; brute force, desk scale.
    pub fn dlog(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        if let Some(t) = &self.tables {
            return Ok(t.log[a as usize] as u64);
        }
        let mut acc = 1u64;
        for i in 0..self.q - 1 {
            if acc == a {
                return Ok(i);
            }
            acc = self.mul(acc, self.primitive);
        }
        unreachable!("element not in the multiplicative group")
    }
}

/// Checked arithmetic on tagged elements, the public entry point mirroring
/// the operation table. Internal hot loops use the raw `Field` methods.
pub fn arith(f: &Field, a: FieldElement, b: FieldElement, op: ArithOp) -> Result<FieldElement> {
    if a.field != f.fingerprint() || b.field != f.fingerprint() {
        return Err(Error::MismatchedFields);
    }
    let enc = match op {
        ArithOp::Add => f.add(a.enc, b.enc),
        ArithOp::Sub => f.sub(a.enc, b.enc),
        ArithOp::Mul => f.mul(a.enc, b.enc),
        ArithOp::Div => f.div(a.enc, b.enc)?,
    };
    Ok(f.element(enc))
}

/// First monic irreducible of degree k over GF(p), ordered by the integer
/// encoding of the non-leading coefficient vector.
fn find_irreducible(p: u64, k: u32) -> Vec<u64> {
    let prime = Field {
        p,
        k: 1,
        q: p,
        modulus: vec![0, 1],
        unit_factors: prime_factors(p - 1),
        primitive: 0,
        tables: None,
        fingerprint: 0,
    };
    let total = (p as u128).pow(k);
    let mut enc = 0u128;
    while enc < total {
        let mut coeffs = Vec::with_capacity(k as usize + 1);
        let mut e = enc;
        for _ in 0..k {
            coeffs.push((e % p as u128) as u64);
            e /= p as u128;
        }
        coeffs.push(1);
        if poly_is_irreducible(&prime, &coeffs) {
            return coeffs;
        }
        enc += 1;
    }
    unreachable!("irreducible polynomials of every degree exist")
}

/// Irreducibility over GF(p): x^(p^k) = x mod f, and x^(p^(k/r)) - x is
/// coprime to f for every prime r | k.
fn poly_is_irreducible(f: &Field, poly: &[u64]) -> bool {
    let k = poly.len() - 1;
    if k == 0 {
        return false;
    }
    if poly[0] == 0 {
        return k == 1; // divisible by x
    }
    let xp = |a: &[u64]| poly_powmod(f, a, f.p(), poly);
    let x = vec![0, 1];
    // frob[i] = x^(p^i) mod poly
    let mut frob = vec![poly_rem(f, &x, poly)];
    for _ in 1..=k {
        let next = xp(frob.last().unwrap());
        frob.push(next);
    }
    if frob[k] != poly_rem(f, &x, poly) {
        return false;
    }
    for r in prime_factors(k as u64) {
        let d = k / r as usize;
        let diff = poly_sub(f, &frob[d], &x);
        let g = poly_gcd(f, &diff, poly);
        if poly_degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Dense polynomials over a field: Vec<u64> of encodings, constant term
// first, no trailing zeros (the zero polynomial is the empty vector).
// ---------------------------------------------------------------------------

pub fn poly_normalize(c: &mut Vec<u64>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

pub fn poly_degree(c: &[u64]) -> Option<usize> {
    if c.is_empty() {
        None
    } else {
        Some(c.len() - 1)
    }
}

pub fn poly_add(f: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = f.add(x, y);
    }
    poly_normalize(&mut out);
    out
}

pub fn poly_sub(f: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = f.sub(x, y);
    }
    poly_normalize(&mut out);
    out
}

pub fn poly_mul(f: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
    }
    poly_normalize(&mut out);
    out
}

pub fn poly_scale(f: &Field, a: &[u64], s: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|&c| f.mul(c, s)).collect();
    poly_normalize(&mut out);
    out
}

/// Quotient and remainder with deg r < deg b.
pub fn poly_divrem(f: &Field, a: &[u64], b: &[u64]) -> Result<(Vec<u64>, Vec<u64>)> {
    if b.is_empty() {
        return Err(Error::DivisionByZero);
    }
    let db = b.len() - 1;
    let lead_inv = f.inv(*b.last().unwrap())?;
    let mut rem: Vec<u64> = a.to_vec();
    poly_normalize(&mut rem);
    if rem.len() <= db {
        return Ok((Vec::new(), rem));
    }
    let mut quot = vec![0u64; rem.len() - db];
    while rem.len() > db {
        let c = f.mul(*rem.last().unwrap(), lead_inv);
        let shift = rem.len() - 1 - db;
        quot[shift] = c;
        for (j, &bc) in b.iter().enumerate() {
            let idx = shift + j;
            rem[idx] = f.sub(rem[idx], f.mul(c, bc));
        }
        poly_normalize(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    poly_normalize(&mut quot);
    Ok((quot, rem))
}

pub fn poly_rem(f: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    poly_divrem(f, a, b).expect("nonzero divisor").1
}

pub fn poly_gcd(f: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_normalize(&mut x);
    poly_normalize(&mut y);
    while !y.is_empty() {
        let r = poly_rem(f, &x, &y);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        if lead != 1 {
            let inv = f.inv(lead).unwrap();
            x = poly_scale(f, &x, inv);
        }
    }
    x
}

pub fn poly_powmod(f: &Field, a: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut base = poly_rem(f, a, m);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(f, &poly_mul(f, &acc, &base), m);
        }
        base = poly_rem(f, &poly_mul(f, &base, &base), m);
        e >>= 1;
    }
    acc
}

pub fn poly_eval(f: &Field, a: &[u64], x: u64) -> u64 {
    let mut acc = 0u64;
    for &c in a.iter().rev() {
        acc = f.add(f.mul(acc, x), c);
    }
    acc
}

/// Monic polynomial with exactly the given multiset of roots.
pub fn poly_from_roots(f: &Field, roots: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    for &r in roots {
        acc = poly_mul(f, &acc, &[f.neg(r), 1]);
    }
    acc
}

/// True iff every coefficient c satisfies c^q = c, i.e. the polynomial has
/// all coefficients in the subfield of size q.
pub fn is_over_subfield(f: &Field, poly: &[u64], q_sub: u64) -> bool {
    poly.iter().all(|&c| f.pow(c, q_sub) == c)
}

// ---------------------------------------------------------------------------
// Subfield embedding GF(q) -> GF(q^m), both built over the same prime field.
// ---------------------------------------------------------------------------

/// Embedding table of the base field into the extension: `table[enc]` is the
/// extension encoding of the base element `enc`.
///
/// The base modulus is re-rooted inside the extension (its roots live in the
/// unique subfield of the right size); the smallest root in encoding order
/// pins the embedding deterministically.
pub fn subfield_embedding(base: &Field, ext: &Field) -> Result<Vec<u64>> {
    if base.p() != ext.p() || !ext.k().is_multiple_of(base.k()) {
        return Err(Error::MismatchedFields);
    }
    if base.k() == ext.k() {
        // same construction, identity embedding
        return Ok((0..base.size()).collect());
    }
    if base.k() == 1 {
        // prime subfield: constants encode identically
        return Ok((0..base.p()).collect());
    }
    // lift the base modulus (prime-field coefficients encode identically)
    let modulus = base.modulus().to_vec();
    // candidate roots live in the multiplicative subgroup of order q-1
    let h = ext.pow(ext.primitive(), (ext.size() - 1) / (base.size() - 1));
    let mut root = None;
    let mut cand = Vec::with_capacity(base.size() as usize);
    cand.push(0u64);
    let mut acc = 1u64;
    for _ in 0..base.size() - 1 {
        cand.push(acc);
        acc = ext.mul(acc, h);
    }
    cand.sort_unstable();
    for c in cand {
        if poly_eval(ext, &modulus, c) == 0 {
            root = Some(c);
            break;
        }
    }
    let root = root.expect("base modulus splits in the extension");
    // powers of the root give the image of the basis
    let mut basis = Vec::with_capacity(base.k() as usize);
    let mut pw = 1u64;
    for _ in 0..base.k() {
        basis.push(pw);
        pw = ext.mul(pw, root);
    }
    let mut table = vec![0u64; base.size() as usize];
    for (enc, slot) in table.iter_mut().enumerate() {
        let mut e = enc as u64;
        let mut acc = 0u64;
        for b in &basis {
            let digit = e % base.p();
            e /= base.p();
            if digit != 0 {
                acc = ext.add(acc, ext.mul(digit, *b));
            }
        }
        *slot = acc;
    }
    Ok(table)
}
