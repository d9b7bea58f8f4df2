//! Cyclic and constacyclic code model: defining sets with Frobenius
//! closure, generator polynomials built from roots in a minimal extension,
//! encoders, parity-check matrices, and the discrete Fourier transform of
//! codewords.
//!
//! Conventions. A length-n code over GF(q) with unit constant `lambda` is an
//! ideal of GF(q)\[x\]/(x^n - lambda). Roots of the generator are written
//! `eta * xi^i` where `xi` is a fixed primitive n-th root of unity in the
//! extension and `eta^n = lambda`; the defining set stores the exponents i.
//! For cyclic codes (`lambda = 1`) we take `eta = 1`, so membership of i in
//! the defining set is exactly "the DFT of every codeword vanishes at i".

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    is_over_subfield, poly_divrem, poly_from_roots, poly_mul, poly_normalize,
    subfield_embedding, Field,
};
use crate::error::{Error, Result};

/// Size cap for the working extension field GF(q^m).
const EXT_CAP: u64 = 1 << 48;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Split a prime power into (p, k); errors when q is not a prime power.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
    }
    let mut p = q;
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            p = d;
            break;
        }
        d += 1;
    }
    let mut k = 0u32;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    if rest != 1 {
        return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
    }
    Ok((p, k))
}

/// How the unit constant of the code is specified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LambdaSpec {
    /// lambda = 1 (cyclic code)
    One,
    /// lambda = -1 (negacyclic code)
    MinusOne,
    /// lambda = g^e for the canonical primitive g of the base field
    PrimPow(u64),
    /// lambda derived as eta^n for the canonical primitive (2-part * n)-th
    /// root of unity eta; kappa is taken as the 2-part of q - 1
    EtaN,
}

impl LambdaSpec {
    pub fn parse(token: &str) -> Result<LambdaSpec> {
        match token {
            "1" => Ok(LambdaSpec::One),
            "-1" => Ok(LambdaSpec::MinusOne),
            "eta^n" => Ok(LambdaSpec::EtaN),
            _ => {
                if let Some(e) = token.strip_prefix("g^") {
                    let e: u64 = e
                        .parse()
                        .map_err(|_| Error::InvalidParameter(format!("bad exponent in {token:?}")))?;
                    Ok(LambdaSpec::PrimPow(e))
                } else {
                    Err(Error::InvalidParameter(format!("bad lambda token {token:?}")))
                }
            }
        }
    }

    pub fn token(&self) -> String {
        match self {
            LambdaSpec::One => "1".into(),
            LambdaSpec::MinusOne => "-1".into(),
            LambdaSpec::PrimPow(e) => format!("g^{e}"),
            LambdaSpec::EtaN => "eta^n".into(),
        }
    }
}

/// Serialize a base-field element as "0" or "g^e".
pub fn element_token(f: &Field, enc: u64) -> String {
    if enc == 0 {
        "0".into()
    } else {
        format!("g^{}", f.dlog(enc).expect("nonzero"))
    }
}

pub fn parse_element_token(f: &Field, token: &str) -> Result<u64> {
    if token == "0" {
        return Ok(0);
    }
    if let Some(e) = token.strip_prefix("g^") {
        let e: u64 =
            e.parse().map_err(|_| Error::InvalidParameter(format!("bad element {token:?}")))?;
        return Ok(f.pow(f.primitive(), e));
    }
    Err(Error::InvalidParameter(format!("bad element token {token:?}")))
}

/// On-disk JSON form of a code specification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeFile {
    pub q: u64,
    pub n: u32,
    pub lambda: String,
    pub defining_set: Vec<u32>,
}

/// On-disk form of a codeword witness, carrying the code it lives in so the
/// claim can be re-checked from the file alone.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistanceWitnessFile {
    pub code: CodeFile,
    pub codeword: Vec<String>,
    pub weight: u32,
    pub seed: u64,
    pub iteration: u64,
}

/// A fully constructed code: base and extension fields, distinguished roots,
/// Frobenius-closed defining set, and the generator polynomial over the base
/// field.
#[derive(Clone, Debug)]
pub struct CodeSpec {
    pub q: u64,
    pub n: u32,
    pub lambda_spec: LambdaSpec,
    /// Base-field encoding of lambda.
    pub lambda: u64,
    /// Multiplicative order of lambda.
    pub kappa: u32,
    /// Frobenius-closed defining set (exponents of xi).
    pub defining_set: BTreeSet<u32>,
    /// True when closure added exponents beyond the supplied set.
    pub closure_added: bool,
    /// Dimension n - |defining_set|.
    pub k: u32,
    /// Extension degree m over GF(q).
    pub ext_degree: u32,
    pub base: Arc<Field>,
    pub ext: Arc<Field>,
    /// Embedding table GF(q) -> GF(q^m).
    embed: Vec<u64>,
    /// Reverse lookup of `embed`.
    unembed: HashMap<u64, u64>,
    /// Extension encodings of eta and xi.
    pub eta: u64,
    pub xi: u64,
    /// Generator polynomial over the base field, constant term first.
    pub generator: Vec<u64>,
}

/// Frobenius closure of a defining set.
///
/// For cyclic codes (kappa = 1) this is the usual orbit closure under
/// i -> q*i mod n. For kappa > 1 the roots are eta^(1 + kappa*i), so the
/// orbit runs in the exponent domain mod kappa*n and maps back.
pub fn frobenius_closure(q: u64, n: u32, kappa: u32, s: &BTreeSet<u32>) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    if kappa == 1 {
        for &i in s {
            let mut e = i as u64 % n as u64;
            loop {
                if !out.insert(e as u32) {
                    break;
                }
                e = e * (q % n as u64) % n as u64;
            }
        }
    } else {
        let kn = kappa as u64 * n as u64;
        for &i in s {
            let mut e = (1 + kappa as u64 * i as u64) % kn;
            loop {
                let back = ((e + kn - 1) % kn) / kappa as u64;
                if !out.insert(back as u32) {
                    break;
                }
                e = e * (q % kn) % kn;
            }
        }
    }
    out
}

impl CodeSpec {
    /// Build a code from (q, n, lambda, defining set). The set is replaced
    /// by its Frobenius closure; the generator is computed from the roots in
    /// the minimal extension and verified to lie over GF(q) and to divide
    /// x^n - lambda.
    pub fn from_defining_set(
        q: u64,
        n: u32,
        lambda_spec: LambdaSpec,
        s: &BTreeSet<u32>,
    ) -> Result<CodeSpec> {
        let (p, deg) = prime_power(q)?;
        if n == 0 || gcd(n as u64, q) != 1 {
            return Err(Error::NonCoprimeLength(n, q));
        }
        for &i in s {
            if i >= n {
                return Err(Error::InvalidExponent(i, n));
            }
        }
        let base = Field::cached(p, deg, crate::algebra::DEFAULT_FIELD_CAP)?;

        // resolve lambda and kappa; EtaN defers lambda until eta exists
        let (lambda_pre, kappa) = match &lambda_spec {
            LambdaSpec::One => (Some(1u64), 1u32),
            LambdaSpec::MinusOne => {
                let l = base.neg(1);
                let kappa = if l == 1 { 1 } else { 2 };
                (Some(l), kappa)
            }
            LambdaSpec::PrimPow(e) => {
                let l = base.pow(base.primitive(), *e);
                (Some(l), base.element_order(l)? as u32)
            }
            LambdaSpec::EtaN => {
                let mut two_part = 1u32;
                let mut rest = q - 1;
                while rest.is_multiple_of(2) {
                    two_part *= 2;
                    rest /= 2;
                }
                (None, two_part)
            }
        };

        // minimal m with kappa*n | q^m - 1
        let kn = kappa as u64 * n as u64;
        let mut m = 0u32;
        let mut acc = 1u64;
        loop {
            m += 1;
            acc = acc * (q % kn) % kn;
            if acc == 1 {
                break;
            }
            if m > 64 {
                return Err(Error::InvalidParameter(format!(
                    "no usable extension: ord of {q} mod {kn} too large"
                )));
            }
        }
        let ext = Field::cached(p, deg * m, EXT_CAP)?;
        let embed = subfield_embedding(&base, &ext)?;
        let unembed: HashMap<u64, u64> =
            embed.iter().enumerate().map(|(b, &e)| (e, b as u64)).collect();

        // distinguished roots
        let big = ext.size();
        let (eta, lambda) = match (&lambda_spec, lambda_pre) {
            (LambdaSpec::One, _) => (1u64, 1u64),
            (LambdaSpec::EtaN, _) => {
                let eta = ext.nth_root_of_unity(kn)?;
                let lam_ext = ext.pow(eta, n as u64);
                let lam = *unembed
                    .get(&lam_ext)
                    .ok_or_else(|| Error::InvalidParameter("eta^n escaped GF(q)".into()))?;
                (eta, lam)
            }
            (_, None) => unreachable!("lambda resolved above for explicit specs"),
            (_, Some(1)) => (1u64, 1u64),
            (_, Some(lam)) => {
                // smallest power of the canonical primitive kn-th root whose
                // n-th power is lambda and whose kappa-th power is primitive
                let eta_base = ext.nth_root_of_unity(kn)?;
                let lam_ext = embed[lam as usize];
                let mut eta = None;
                let mut cand = eta_base;
                for _ in 1..=kn {
                    if ext.pow(cand, n as u64) == lam_ext
                        && ext.element_order(ext.pow(cand, kappa as u64))? == n as u64
                    {
                        eta = Some(cand);
                        break;
                    }
                    cand = ext.mul(cand, eta_base);
                }
                let eta = eta.ok_or_else(|| {
                    Error::InvalidParameter(format!("no root eta with eta^{n} = lambda"))
                })?;
                (eta, lam)
            }
        };
        let _ = big;
        let xi = if kappa == 1 { ext.nth_root_of_unity(n as u64)? } else { ext.pow(eta, kappa as u64) };
        debug_assert_eq!(ext.element_order(xi)?, n as u64);
        debug_assert_eq!(ext.pow(eta, n as u64), embed[lambda as usize]);

        let closed = frobenius_closure(q, n, kappa, s);
        let closure_added = closed.len() != s.len();
        let k = n - closed.len() as u32;

        // generator from roots, checked back into the base field
        let roots: Vec<u64> =
            closed.iter().map(|&i| ext.mul(eta, ext.pow(xi, i as u64))).collect();
        let gen_ext = poly_from_roots(&ext, &roots);
        if !is_over_subfield(&ext, &gen_ext, q) {
            return Err(Error::InvalidParameter(
                "closed defining set produced a generator outside GF(q)".into(),
            ));
        }
        let generator: Vec<u64> = gen_ext
            .iter()
            .map(|c| *unembed.get(c).expect("subfield coefficient"))
            .collect();

        // g divides x^n - lambda
        let mut xn = vec![0u64; n as usize + 1];
        xn[0] = base.neg(lambda);
        xn[n as usize] = 1;
        let (_, rem) = poly_divrem(&base, &xn, &generator)?;
        if !rem.is_empty() {
            return Err(Error::InvalidParameter("generator does not divide x^n - lambda".into()));
        }

        Ok(CodeSpec {
            q,
            n,
            lambda_spec,
            lambda,
            kappa,
            defining_set: closed,
            closure_added,
            k,
            ext_degree: m,
            base,
            ext,
            embed,
            unembed,
            eta,
            xi,
            generator,
        })
    }

    pub fn from_file(file: &CodeFile) -> Result<CodeSpec> {
        let lambda = LambdaSpec::parse(&file.lambda)?;
        let s: BTreeSet<u32> = file.defining_set.iter().copied().collect();
        CodeSpec::from_defining_set(file.q, file.n, lambda, &s)
    }

    pub fn to_file(&self) -> CodeFile {
        CodeFile {
            q: self.q,
            n: self.n,
            lambda: self.lambda_spec.token(),
            defining_set: self.defining_set.iter().copied().collect(),
        }
    }

    pub fn embed(&self, base_enc: u64) -> u64 {
        self.embed[base_enc as usize]
    }

    /// Inverse of [`CodeSpec::embed`] for elements of the subfield image.
    pub fn unembed(&self, ext_enc: u64) -> Option<u64> {
        self.unembed.get(&ext_enc).copied()
    }

    /// Extension-field root eta * xi^i.
    pub fn root(&self, i: u32) -> u64 {
        self.ext.mul(self.eta, self.ext.pow(self.xi, i as u64))
    }

    /// |S| x n matrix over the extension whose row for exponent i is
    /// (root_i^0, ..., root_i^(n-1)); it annihilates every codeword.
    pub fn parity_check_matrix(&self) -> Vec<Vec<u64>> {
        self.defining_set
            .iter()
            .map(|&i| {
                let r = self.root(i);
                let mut row = Vec::with_capacity(self.n as usize);
                let mut acc = 1u64;
                for _ in 0..self.n {
                    row.push(acc);
                    acc = self.ext.mul(acc, r);
                }
                row
            })
            .collect()
    }

    /// Multiply the message polynomial by the generator, reduced in
    /// GF(q)\[x\]/(x^n - lambda).
    pub fn encode(&self, message: &[u64]) -> Result<Vec<u64>> {
        if message.len() != self.k as usize {
            return Err(Error::LengthMismatch { expected: self.k as usize, got: message.len() });
        }
        let mut prod = poly_mul(&self.base, message, &self.generator);
        // fold x^(n+t) onto lambda * x^t
        while prod.len() > self.n as usize {
            let c = prod.pop().unwrap();
            if c != 0 {
                let t = prod.len() - self.n as usize;
                prod[t] = self.base.add(prod[t], self.base.mul(self.lambda, c));
            }
        }
        prod.resize(self.n as usize, 0);
        Ok(prod)
    }

    /// Rows of the generator matrix: x^j * g reduced, for j = 0..k.
    pub fn generator_matrix(&self) -> Vec<Vec<u64>> {
        let mut rows = Vec::with_capacity(self.k as usize);
        for j in 0..self.k as usize {
            let mut row = vec![0u64; self.n as usize];
            for (d, &c) in self.generator.iter().enumerate() {
                row[j + d] = c; // deg g = n - k, so j + d < n
            }
            rows.push(row);
        }
        rows
    }

    /// Membership test: the codeword polynomial is divisible by the
    /// generator.
    pub fn is_codeword(&self, word: &[u64]) -> Result<bool> {
        if word.len() != self.n as usize {
            return Err(Error::LengthMismatch { expected: self.n as usize, got: word.len() });
        }
        let mut w = word.to_vec();
        poly_normalize(&mut w);
        if w.is_empty() {
            return Ok(true);
        }
        let (_, rem) = poly_divrem(&self.base, &w, &self.generator)?;
        Ok(rem.is_empty())
    }

    /// Constacyclic shift (lambda * c_{n-1}, c_0, ..., c_{n-2}).
    pub fn shift(&self, word: &[u64]) -> Vec<u64> {
        let n = word.len();
        let mut out = Vec::with_capacity(n);
        out.push(self.base.mul(self.lambda, word[n - 1]));
        out.extend_from_slice(&word[..n - 1]);
        out
    }

    /// Discrete Fourier transform A_i = sum_j c_j xi^(i*j), over the
    /// extension field.
    pub fn dft(&self, word: &[u64]) -> Vec<u64> {
        let n = self.n as usize;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let xi_i = self.ext.pow(self.xi, i as u64);
            let mut acc = 0u64;
            let mut pw = 1u64;
            for &c in word.iter().take(n) {
                if c != 0 {
                    acc = self.ext.add(acc, self.ext.mul(self.embed[c as usize], pw));
                }
                pw = self.ext.mul(pw, xi_i);
            }
            out.push(acc);
        }
        out
    }

    /// Hamming weight helper.
    pub fn weight(word: &[u64]) -> u32 {
        word.iter().filter(|&&c| c != 0).count() as u32
    }
}
