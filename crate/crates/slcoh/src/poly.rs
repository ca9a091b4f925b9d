//! Dense polynomials over a prime field `F_p`.
//!
//! Coefficient vectors are stored constant term first and kept normalized:
//! no trailing zeros, so the zero polynomial is the empty vector. Every
//! function takes the prime `p` explicitly; coefficients are reduced mod `p`.

/// Strips trailing zero coefficients in place.
pub fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Degree of `a`, or `None` for the zero polynomial.
pub fn deg(a: &[u32]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn is_zero(a: &[u32]) -> bool {
    a.is_empty()
}

pub fn is_one(a: &[u32]) -> bool {
    a == [1]
}

pub fn add(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; a.len().max(b.len())];
    for (i, out_i) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *out_i = (x + y) % p;
    }
    trim(&mut out);
    out
}

pub fn neg(p: u32, a: &[u32]) -> Vec<u32> {
    a.iter().map(|&c| (p - c) % p).collect()
}

pub fn sub(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    add(p, a, &neg(p, b))
}

pub fn mul(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

pub fn scale(p: u32, a: &[u32], c: u32) -> Vec<u32> {
    let mut out: Vec<u32> = a
        .iter()
        .map(|&x| ((x as u64 * c as u64) % p as u64) as u32)
        .collect();
    trim(&mut out);
    out
}

/// Multiplicative inverse of a nonzero scalar mod `p`.
pub fn inv_scalar(p: u32, a: u32) -> u32 {
    assert!(!a.is_multiple_of(p), "inverse of zero scalar");
    // extended Euclid on (a, p)
    let (mut r0, mut r1) = (a as i64 % p as i64, p as i64);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(p as i64) as u32
}

/// Quotient and remainder of `a` by nonzero `b`; trailing zero coefficients
/// on either argument are tolerated.
pub fn divrem(p: u32, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let mut b: Vec<u32> = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut rem: Vec<u32> = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let db = b.len() - 1;
    let lead_inv = inv_scalar(p, b[db]);
    let mut quot = vec![0u32; rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = ((*rem.last().unwrap() as u64 * lead_inv as u64) % p as u64) as u32;
        quot[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            let s = c as u64 * bc as u64 % p as u64;
            rem[shift + i] = ((rem[shift + i] as u64 + p as u64 - s) % p as u64) as u32;
        }
        trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    trim(&mut quot);
    (quot, rem)
}

pub fn rem(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    divrem(p, a, b).1
}

/// Makes `a` monic; `a` must be nonzero.
pub fn monic(p: u32, a: &[u32]) -> Vec<u32> {
    let lead = *a.last().expect("monic of zero polynomial");
    if lead == 1 {
        a.to_vec()
    } else {
        scale(p, a, inv_scalar(p, lead))
    }
}

/// Monic gcd; gcd(0, 0) = 0.
pub fn gcd(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    while !r1.is_empty() {
        let r = rem(p, &r0, &r1);
        r0 = r1;
        r1 = r;
    }
    if r0.is_empty() {
        r0
    } else {
        monic(p, &r0)
    }
}

/// Inverse of `a` modulo `m` via extended Euclid, if gcd(a, m) = 1.
pub fn inv_mod(p: u32, a: &[u32], m: &[u32]) -> Option<Vec<u32>> {
    let (mut r0, mut r1) = (m.to_vec(), rem(p, a, m));
    let (mut t0, mut t1) = (Vec::new(), vec![1u32]);
    while !r1.is_empty() {
        let (q, r) = divrem(p, &r0, &r1);
        let t = sub(p, &t0, &mul(p, &q, &t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if deg(&r0) != Some(0) {
        return None;
    }
    Some(scale(p, &t0, inv_scalar(p, r0[0])))
}

/// Formal derivative.
pub fn derivative(p: u32, a: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| ((i as u64 % p as u64) * c as u64 % p as u64) as u32)
        .collect();
    trim(&mut out);
    out
}

pub fn eval(p: u32, a: &[u32], x: u32) -> u32 {
    let mut acc = 0u64;
    for &c in a.iter().rev() {
        acc = (acc * x as u64 + c as u64) % p as u64;
    }
    acc as u32
}

/// Irreducibility over `F_p` by exhaustive trial division.
///
/// Only intended for the small moduli this crate allows (degree at most 4,
/// small p), where scanning every monic divisor candidate of degree up to
/// deg/2 is instant.
pub fn is_irreducible(p: u32, a: &[u32]) -> bool {
    let d = match deg(a) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(d) => d,
    };
    for dd in 1..=d / 2 {
        // all monic polynomials of degree dd
        let count = (p as u64).pow(dd as u32);
        for idx in 0..count {
            let mut cand = vec![0u32; dd + 1];
            cand[dd] = 1;
            let mut rest = idx;
            for c in cand.iter_mut().take(dd) {
                *c = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            if rem(p, a, &cand).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The lexicographically first monic irreducible polynomial of degree `e`,
/// scanning constant coefficients fastest.
pub fn first_irreducible(p: u32, e: usize) -> Vec<u32> {
    let count = (p as u64).pow(e as u32);
    for idx in 0..count {
        let mut cand = vec![0u32; e + 1];
        cand[e] = 1;
        let mut rest = idx;
        for c in cand.iter_mut().take(e) {
            *c = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        if is_irreducible(p, &cand) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_roundtrip() {
        let p = 5;
        let a = vec![1, 2, 3, 4];
        let b = vec![2, 1];
        let (q, r) = divrem(p, &a, &b);
        let back = add(p, &mul(p, &q, &b), &r);
        assert_eq!(back, a);
        assert!(deg(&r) < deg(&b));
    }

    #[test]
    fn gcd_of_multiples() {
        let p = 3;
        let g = vec![1, 1]; // x + 1
        let a = mul(p, &g, &[1, 0, 1]); // cofactor x^2 + 1, irreducible over F_3
        let b = mul(p, &g, &[2, 1]);
        assert_eq!(gcd(p, &a, &b), g);
    }

    #[test]
    fn inv_mod_works() {
        let p = 2;
        let m = vec![1, 1, 1]; // x^2 + x + 1 over F_2
        let a = vec![0, 1]; // x
        let inv = inv_mod(p, &a, &m).unwrap();
        assert_eq!(rem(p, &mul(p, &a, &inv), &m), vec![1]);
    }

    #[test]
    fn derivative_kills_p_th_powers() {
        // d/dx of x^2 over F_2 is 0
        assert!(derivative(2, &[0, 0, 1]).is_empty());
        // d/dx of x^3 over F_3 is 0
        assert!(derivative(3, &[0, 0, 0, 1]).is_empty());
        assert_eq!(derivative(3, &[0, 0, 1]), vec![0, 2]);
    }

    #[test]
    fn irreducibility_small_cases() {
        assert!(is_irreducible(2, &[1, 1, 1])); // x^2+x+1
        assert!(!is_irreducible(2, &[1, 0, 1])); // x^2+1 = (x+1)^2
        assert!(is_irreducible(3, &[1, 0, 1])); // x^2+1 over F_3
        assert!(is_irreducible(2, &[1, 1, 0, 1])); // x^3+x+1
        assert!(is_irreducible(2, &[1, 1, 0, 0, 1])); // x^4+x+1
        assert!(!is_irreducible(2, &[1, 0, 1, 0, 1])); // x^4+x^2+1 = (x^2+x+1)^2
    }

    #[test]
    fn first_irreducibles() {
        assert_eq!(first_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(first_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(first_irreducible(3, 2), vec![1, 0, 1]);
    }
}
