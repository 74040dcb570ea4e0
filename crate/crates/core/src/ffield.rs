//! Exact arithmetic in F_p and its finite extensions F_{p^m}.
//!
//! Extensions are represented as F_p[X]/(modulus) with a deterministically
//! chosen irreducible modulus, so builds are reproducible across runs.
//! The module also computes the kernel of an additive polynomial
//! `P(X) = c_0 X + c_1 X^p + ... + c_n X^(p^n)` as an F_p-vector space,
//! searching through extension fields until the kernel has full dimension n.

use alloc::vec::Vec;
use core::fmt;

/// Largest supported prime.
pub const MAX_PRIME: u64 = 17;
/// Largest supported extension degree. Keeps p^m enumeration feasible.
pub const MAX_DEGREE: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FfError {
    /// p is not prime.
    NotPrime(u64),
    /// p is prime but outside the supported range 2..=17.
    PrimeOutOfRange(u64),
    /// Extension degree outside 1..=12.
    DegreeTooLarge(usize),
    /// additive_kernel ran out of extensions to search; raise the bound.
    KernelNotFound { searched_up_to: usize },
    /// Additive polynomial with c_0 = 0 or all coefficients zero.
    NotSeparable,
    /// Element does not belong to the given field.
    WrongField { expected: usize, got: usize },
    /// Exhaustive embedding search would be too large; shrink the field.
    SearchSpaceTooLarge,
}

impl fmt::Display for FfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FfError::NotPrime(p) => write!(f, "{p} is not prime"),
            FfError::PrimeOutOfRange(p) => write!(f, "prime {p} outside supported range 2..=17"),
            FfError::DegreeTooLarge(m) => write!(f, "extension degree {m} outside 1..=12"),
            FfError::KernelNotFound { searched_up_to } => {
                write!(
                    f,
                    "no kernel of full dimension up to extension step {searched_up_to}"
                )
            }
            FfError::NotSeparable => write!(f, "additive polynomial is not separable (c_0 = 0)"),
            FfError::WrongField { expected, got } => {
                write!(f, "element of degree {got} in a field of degree {expected}")
            }
            FfError::SearchSpaceTooLarge => write!(f, "field too large for exhaustive search"),
        }
    }
}

/// The fixed prime of the whole computation, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeConfig {
    p: u64,
}

impl PrimeConfig {
    pub fn new(p: u64) -> Result<Self, FfError> {
        if !is_prime(p) {
            return Err(FfError::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(FfError::PrimeOutOfRange(p));
        }
        Ok(PrimeConfig { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of an extension field, stored as coefficients of the power basis
/// 1, g, ..., g^(m-1) where g is the class of X.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FfElt {
    c: Vec<u64>,
}

impl FfElt {
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }
}

/// The field F_{p^m} = F_p[X]/(modulus).
///
/// The modulus is the lexicographically least monic irreducible of degree m:
/// least when the non-leading coefficients (c_{m-1}, ..., c_0) are read as a
/// base-p integer, so the choice is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    p: u64,
    m: usize,
    /// Monic modulus, coefficients c_0..c_m with c_m = 1. For m = 1 this is
    /// X (the trivial quotient F_p[X]/(X) = F_p).
    modulus: Vec<u64>,
}

impl ExtField {
    /// Builds F_{p^m} with the canonical modulus.
    pub fn build(p: u64, m: usize) -> Result<Self, FfError> {
        let cfg = PrimeConfig::new(p)?;
        let p = cfg.p();
        if m < 1 || m > MAX_DEGREE {
            return Err(FfError::DegreeTooLarge(m));
        }
        if m == 1 {
            return Ok(ExtField {
                p,
                m,
                modulus: alloc::vec![0, 1],
            });
        }
        // Enumerate non-leading coefficient vectors as ascending base-p
        // integers, most significant digit at X^(m-1).
        let mut count = 1u64;
        for _ in 0..m {
            count = count.saturating_mul(p);
        }
        for code in 0..count {
            let mut modulus = alloc::vec![0u64; m + 1];
            modulus[m] = 1;
            let mut rem = code;
            for i in (0..m).rev() {
                modulus[i] = rem % p;
                rem /= p;
            }
            if poly_is_irreducible(p, &modulus) {
                return Ok(ExtField { p, m, modulus });
            }
        }
        unreachable!("irreducible polynomials of every degree exist over F_p")
    }

    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Self, FfError> {
        Self::build(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// p^m, the number of elements.
    pub fn order(&self) -> u64 {
        let mut n = 1u64;
        for _ in 0..self.m {
            n = n.saturating_mul(self.p);
        }
        n
    }

    pub fn zero(&self) -> FfElt {
        FfElt {
            c: alloc::vec![0; self.m],
        }
    }

    pub fn one(&self) -> FfElt {
        self.from_int(1)
    }

    pub fn from_int(&self, n: u64) -> FfElt {
        let mut c = alloc::vec![0; self.m];
        c[0] = n % self.p;
        FfElt { c }
    }

    /// Element from power-basis coefficients (shorter vectors are padded).
    pub fn elt(&self, coeffs: &[u64]) -> Result<FfElt, FfError> {
        if coeffs.len() > self.m {
            return Err(FfError::WrongField {
                expected: self.m,
                got: coeffs.len(),
            });
        }
        let mut c = alloc::vec![0; self.m];
        for (i, &x) in coeffs.iter().enumerate() {
            c[i] = x % self.p;
        }
        Ok(FfElt { c })
    }

    /// The class of X, a generator of the power basis.
    pub fn gen(&self) -> FfElt {
        if self.m == 1 {
            // F_p[X]/(X): the class of X is 0; the power basis is just {1}.
            return self.zero();
        }
        let mut c = alloc::vec![0; self.m];
        c[1] = 1;
        FfElt { c }
    }

    pub fn is_zero(&self, a: &FfElt) -> bool {
        a.c.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &FfElt, b: &FfElt) -> FfElt {
        let c = a
            .c
            .iter()
            .zip(&b.c)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FfElt { c }
    }

    pub fn neg(&self, a: &FfElt) -> FfElt {
        let c = a.c.iter().map(|&x| (self.p - x) % self.p).collect();
        FfElt { c }
    }

    pub fn sub(&self, a: &FfElt, b: &FfElt) -> FfElt {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FfElt, b: &FfElt) -> FfElt {
        let prod = poly_mul_mod(self.p, &a.c, &b.c, &self.modulus);
        let mut c = prod;
        c.resize(self.m, 0);
        FfElt { c }
    }

    pub fn pow(&self, a: &FfElt, mut e: u64) -> FfElt {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via a^(p^m - 2). Panics on zero.
    pub fn inv(&self, a: &FfElt) -> FfElt {
        assert!(!self.is_zero(a), "inverse of zero");
        self.pow(a, self.order() - 2)
    }

    /// The Frobenius endomorphism a -> a^p.
    pub fn frobenius(&self, a: &FfElt) -> FfElt {
        self.pow(a, self.p)
    }

    /// The inverse of Frobenius: a -> a^(p^(m-1)), the unique p-th root.
    pub fn p_root(&self, a: &FfElt) -> FfElt {
        let mut out = a.clone();
        for _ in 0..self.m.saturating_sub(1) {
            out = self.frobenius(&out);
        }
        out
    }

    /// Every element, in base-p counter order. p^m iterations.
    pub fn elements(&self) -> impl Iterator<Item = FfElt> + '_ {
        let order = self.order();
        (0..order).map(move |code| {
            let mut c = alloc::vec![0; self.m];
            let mut rem = code;
            for slot in c.iter_mut() {
                *slot = rem % self.p;
                rem /= self.p;
            }
            FfElt { c }
        })
    }

    /// Evaluates the additive polynomial with coefficients `coeffs`
    /// (c_0..c_n) at `a`: sum of c_i * a^(p^i).
    pub fn eval_additive(&self, coeffs: &[FfElt], a: &FfElt) -> FfElt {
        let mut acc = self.zero();
        let mut frob = a.clone();
        for (i, c) in coeffs.iter().enumerate() {
            if i > 0 {
                frob = self.frobenius(&frob);
            }
            acc = self.add(&acc, &self.mul(c, &frob));
        }
        acc
    }
}

/// Embedding of a smaller field into a larger one, determined by the image
/// of the power-basis generator.
#[derive(Debug, Clone)]
pub struct FieldEmbedding {
    pub from: ExtField,
    pub to: ExtField,
    gen_image: FfElt,
}

impl FieldEmbedding {
    /// Identity embedding of a field into itself.
    pub fn identity(field: &ExtField) -> Self {
        FieldEmbedding {
            from: field.clone(),
            to: field.clone(),
            gen_image: field.gen(),
        }
    }

    /// Finds some embedding of `from` into `to` (requires deg(from) | deg(to)).
    /// Exhaustive root search, guarded against oversized fields.
    pub fn find(from: &ExtField, to: &ExtField) -> Result<Self, FfError> {
        assert_eq!(from.p(), to.p());
        assert_eq!(to.degree() % from.degree(), 0);
        if from.degree() == 1 {
            return Ok(FieldEmbedding {
                from: from.clone(),
                to: to.clone(),
                gen_image: to.zero(),
            });
        }
        if to.order() > 1 << 20 {
            return Err(FfError::SearchSpaceTooLarge);
        }
        for cand in to.elements() {
            // evaluate from.modulus at cand
            let mut acc = to.zero();
            let mut pow = to.one();
            for (i, &c) in from.modulus().iter().enumerate() {
                if i > 0 {
                    pow = to.mul(&pow, &cand);
                }
                if c != 0 {
                    acc = to.add(&acc, &to.mul(&to.from_int(c), &pow));
                }
            }
            if to.is_zero(&acc) {
                return Ok(FieldEmbedding {
                    from: from.clone(),
                    to: to.clone(),
                    gen_image: cand,
                });
            }
        }
        unreachable!("an irreducible of degree d splits in any extension of degree divisible by d")
    }

    /// Image of an element of `from` in `to`.
    pub fn map(&self, a: &FfElt) -> FfElt {
        let mut acc = self.to.zero();
        let mut pow = self.to.one();
        for (i, &c) in a.coeffs().iter().enumerate() {
            if i > 0 {
                pow = self.to.mul(&pow, &self.gen_image);
            }
            if c != 0 {
                acc = self.to.add(&acc, &self.to.mul(&self.to.from_int(c), &pow));
            }
        }
        acc
    }
}

/// Result of an additive-kernel search: the extension where the kernel has
/// full dimension, the embedding of the coefficient field into it, and an
/// F_p-basis of the kernel.
#[derive(Debug, Clone)]
pub struct AdditiveKernel {
    pub field: ExtField,
    pub embedding: FieldEmbedding,
    pub basis: Vec<FfElt>,
}

/// Kernel of the additive polynomial `P(X) = sum c_i X^(p^i)` (coefficients
/// over `k`), as an F_p-subspace of the least extension F_{p^(m*j)},
/// j <= search_bound, where it reaches dimension n.
///
/// Requires c_0 != 0 (separability) and c_n != 0 for the top index n.
pub fn additive_kernel(
    k: &ExtField,
    coeffs: &[FfElt],
    search_bound: usize,
) -> Result<AdditiveKernel, FfError> {
    let n = match coeffs.iter().rposition(|c| !k.is_zero(c)) {
        Some(n) => n,
        None => return Err(FfError::NotSeparable),
    };
    if k.is_zero(&coeffs[0]) {
        return Err(FfError::NotSeparable);
    }
    if n == 0 {
        // P(X) = c_0 X: kernel is trivial.
        return Ok(AdditiveKernel {
            field: k.clone(),
            embedding: FieldEmbedding::identity(k),
            basis: Vec::new(),
        });
    }
    let mut searched = 0;
    for j in 1..=search_bound {
        let degree = k.degree() * j;
        if degree > MAX_DEGREE {
            break;
        }
        searched = j;
        let field = ExtField::build(k.p(), degree)?;
        let embedding = FieldEmbedding::find(k, &field)?;
        let cs: Vec<FfElt> = coeffs.iter().map(|c| embedding.map(c)).collect();
        let basis = additive_map_kernel_basis(&field, &cs);
        if basis.len() == n {
            return Ok(AdditiveKernel {
                field,
                embedding,
                basis,
            });
        }
    }
    Err(FfError::KernelNotFound {
        searched_up_to: searched,
    })
}

/// F_p-basis of ker(x -> P(x)) on `field`, by Gaussian elimination on the
/// matrix of the map in the power basis.
fn additive_map_kernel_basis(field: &ExtField, coeffs: &[FfElt]) -> Vec<FfElt> {
    let dim = field.degree();
    let p = field.p();
    // Column i = image of the i-th power-basis vector.
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut basis_vec = alloc::vec![0u64; dim];
        basis_vec[i] = 1;
        let v = FfElt { c: basis_vec };
        let image = field.eval_additive(coeffs, &v);
        cols.push(image.c);
    }
    // Row-reduce the dim x dim matrix (rows = output coordinates).
    let mut mat: Vec<Vec<u64>> = (0..dim)
        .map(|r| (0..dim).map(|c| cols[c][r]).collect())
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..dim {
        let Some(pivot) = (row..dim).find(|&r| mat[r][col] != 0) else {
            continue;
        };
        mat.swap(row, pivot);
        let inv = mod_inv(mat[row][col], p);
        for x in mat[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..dim {
            if r != row && mat[r][col] != 0 {
                let factor = mat[r][col];
                for c in 0..dim {
                    let sub = factor * mat[row][c] % p;
                    mat[r][c] = (mat[r][c] + p - sub) % p;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == dim {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..dim {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = alloc::vec![0u64; dim];
        v[free] = 1;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            // pivot row r reads x_pc + mat[r][free] * x_free = 0
            v[pc] = (p - mat[r][free] % p) % p;
        }
        basis.push(FfElt { c: v });
    }
    basis
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

// --- dense polynomial arithmetic over F_p, used for moduli ---------------

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = alloc::vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let factor = r[dr] * lead_inv % p;
        for (i, &mc) in m.iter().enumerate() {
            let idx = dr - dm + i;
            let sub = factor * mc % p;
            r[idx] = (r[idx] + p - sub) % p;
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_mul_mod(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    poly_rem(p, &poly_mul(p, a, b), m)
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(p, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// X^(p^k) mod m, by iterating the p-th power map on the class of X.
fn x_p_pow_mod(p: u64, k: usize, m: &[u64]) -> Vec<u64> {
    let mut t = poly_rem(p, &[0, 1], m);
    for _ in 0..k {
        // t := t^p mod m
        let mut acc = alloc::vec![1u64];
        let mut base = t.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mul_mod(p, &acc, &base, m);
            }
            base = poly_mul_mod(p, &base, &base, m);
            e >>= 1;
        }
        t = acc;
    }
    t
}

/// `t - X` reduced, for the irreducibility gcd tests.
fn minus_x(p: u64, t: &[u64]) -> Vec<u64> {
    let mut d = t.to_vec();
    if d.len() < 2 {
        d.resize(2, 0);
    }
    d[1] = (d[1] + p - 1) % p;
    poly_trim(&mut d);
    d
}

/// Monic f of degree m is irreducible over F_p iff X^(p^m) = X mod f and
/// gcd(X^(p^(m/q)) - X, f) = 1 for every prime q | m.
fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let m = f.len() - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    if !minus_x(p, &x_p_pow_mod(p, m, f)).is_empty() {
        return false;
    }
    let mut rem = m;
    let mut q = 2;
    while q * q <= m {
        if rem % q == 0 {
            while rem % q == 0 {
                rem /= q;
            }
            let d = minus_x(p, &x_p_pow_mod(p, m / q, f));
            if poly_gcd(p, &d, f).len() != 1 {
                return false;
            }
        }
        q += 1;
    }
    if rem > 1 {
        let d = minus_x(p, &x_p_pow_mod(p, m / rem, f));
        if poly_gcd(p, &d, f).len() != 1 {
            return false;
        }
    }
    true
}
