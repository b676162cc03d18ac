//! Fixed-point multi-limb vectors and an exact-accumulation convolution
//! kernel.
//!
//! The numeric alpha recursion spends almost all of its time in sums of the
//! form `sum_j a_j * w_{k-j}` with real weights. Converting both sides to
//! fixed point once and accumulating the full double-width products exactly
//! means each sum carries a single rounding, at conversion back to a float.

use alloc::vec;
use alloc::vec::Vec;

use astro_float::{BigFloat, Sign, Word};

/// Signed fixed-point numbers sharing one scale `2^-frac_bits`, stored as
/// little-endian magnitude limbs plus a sign flag.
#[derive(Clone, Debug)]
pub(crate) struct FixedVec {
    limbs: usize,
    frac_bits: u32,
    mag: Vec<u64>,
    neg: Vec<bool>,
}

impl FixedVec {
    pub(crate) fn new(limbs: usize, frac_bits: u32) -> Self {
        Self { limbs, frac_bits, mag: Vec::new(), neg: Vec::new() }
    }

    pub(crate) fn len(&self) -> usize {
        self.neg.len()
    }

    #[cfg(test)]
    fn entry(&self, i: usize) -> &[u64] {
        &self.mag[i * self.limbs..(i + 1) * self.limbs]
    }

    #[cfg(test)]
    pub(crate) fn is_zero_at(&self, i: usize) -> bool {
        self.entry(i).iter().all(|&w| w == 0)
    }

    /// Appends `x` rounded to the nearest multiple of `2^-frac_bits`.
    /// Panics if the magnitude does not fit.
    pub(crate) fn push(&mut self, x: &BigFloat) {
        let start = self.mag.len();
        self.mag.resize(start + self.limbs, 0);
        let Some((m, _, sign, e, _)) = x.as_raw_parts() else {
            panic!("fixed-point conversion of a non-finite value");
        };
        self.neg.push(sign == Sign::Neg && m.iter().any(|&w| w != 0));
        if m.iter().all(|&w| w == 0) {
            return;
        }
        // value = int(m) * 2^(e - 64 len); scaled = int(m) * 2^shift
        let shift = e as i64 - 64 * m.len() as i64 + self.frac_bits as i64;
        let top = m.iter().rposition(|&w| w != 0).unwrap_or(0);
        let bit_len = 64 * top as i64 + 64 - m[top].leading_zeros() as i64;
        assert!(bit_len + shift <= 64 * self.limbs as i64, "fixed-point overflow");
        let out = &mut self.mag[start..];
        if shift >= 0 {
            let ws = (shift / 64) as usize;
            let bs = (shift % 64) as u32;
            for (i, &w) in m.iter().enumerate() {
                let lo = i + ws;
                let lo_part = if bs == 0 { w } else { w << bs };
                let hi_part = if bs == 0 { 0 } else { w >> (64 - bs) };
                place(out, lo, lo_part);
                place(out, lo + 1, hi_part);
            }
        } else {
            let rs = (-shift) as u64;
            let ws = (rs / 64) as usize;
            let bs = (rs % 64) as u32;
            // round half up on the discarded bits
            let round_bit_pos = rs - 1;
            let rw = (round_bit_pos / 64) as usize;
            let rb = (round_bit_pos % 64) as u32;
            let round = rw < m.len() && (m[rw] >> rb) & 1 == 1;
            for (i, o) in out.iter_mut().enumerate() {
                let src = i + ws;
                let lo = m.get(src).copied().unwrap_or(0);
                let hi = m.get(src + 1).copied().unwrap_or(0);
                *o = if bs == 0 { lo } else { (lo >> bs) | (hi << (64 - bs)) };
            }
            if round {
                let mut carry = true;
                for o in out.iter_mut() {
                    if !carry {
                        break;
                    }
                    let (v, c) = o.overflowing_add(1);
                    *o = v;
                    carry = c;
                }
                assert!(!carry, "fixed-point overflow");
            }
        }
    }
}

fn place(out: &mut [u64], idx: usize, v: u64) {
    if v == 0 {
        return;
    }
    assert!(idx < out.len(), "fixed-point overflow");
    out[idx] |= v;
}

/// Exact signed accumulator for sums of products of two fixed-point
/// vectors.
pub(crate) struct DotAccumulator {
    pos: Vec<u64>,
    neg: Vec<u64>,
    frac_bits: u32,
}

impl DotAccumulator {
    pub(crate) fn new(a_limbs: usize, w_limbs: usize, frac_bits: u32) -> Self {
        // one spare limb absorbs up to 2^64 accumulated products
        let n = a_limbs + w_limbs + 1;
        Self { pos: vec![0; n], neg: vec![0; n], frac_bits }
    }

    pub(crate) fn clear(&mut self) {
        self.pos.iter_mut().for_each(|w| *w = 0);
        self.neg.iter_mut().for_each(|w| *w = 0);
    }

    /// Adds `sum_{j=lo..=k} a_j * w_{k-j}`. Weights must be nonnegative.
    pub(crate) fn convolve(&mut self, a: &FixedVec, w: &FixedVec, lo: usize, k: usize) {
        debug_assert_eq!(a.frac_bits + w.frac_bits, self.frac_bits);
        let la = a.limbs;
        let lw = w.limbs;
        for j in lo..=k {
            let aj = &a.mag[j * la..(j + 1) * la];
            let wm = &w.mag[(k - j) * lw..(k - j + 1) * lw];
            let acc = if a.neg[j] { &mut self.neg } else { &mut self.pos };
            mul_acc(acc, aj, wm);
        }
    }

    /// The accumulated value as a float carrying every bit of the sum.
    pub(crate) fn to_float(&self) -> BigFloat {
        let (mag, sign) = match cmp_limbs(&self.pos, &self.neg) {
            core::cmp::Ordering::Less => (sub_limbs(&self.neg, &self.pos), Sign::Neg),
            _ => (sub_limbs(&self.pos, &self.neg), Sign::Pos),
        };
        let words: Vec<Word> = mag.iter().map(|&w| w as Word).collect();
        let e = 64 * words.len() as i64 - self.frac_bits as i64;
        BigFloat::from_words(&words, sign, e as i32)
    }
}

#[inline(always)]
fn mul_acc(acc: &mut [u64], a: &[u64], b: &[u64]) {
    let la = a.len();
    let lb = b.len();
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let mut carry: u64 = 0;
        for (j, &bj) in b.iter().enumerate() {
            let t = acc[i + j] as u128 + (ai as u128) * (bj as u128) + carry as u128;
            acc[i + j] = t as u64;
            carry = (t >> 64) as u64;
        }
        let mut idx = i + lb;
        while carry != 0 {
            let (v, c) = acc[idx].overflowing_add(carry);
            acc[idx] = v;
            carry = c as u64;
            idx += 1;
        }
    }
    let _ = la;
}

fn cmp_limbs(a: &[u64], b: &[u64]) -> core::cmp::Ordering {
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            core::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    core::cmp::Ordering::Equal
}

fn sub_limbs(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len()];
    let mut borrow = 0u64;
    for i in 0..a.len() {
        let (d1, b1) = a[i].overflowing_sub(b[i]);
        let (d2, b2) = d1.overflowing_sub(borrow);
        out[i] = d2;
        borrow = (b1 || b2) as u64;
    }
    debug_assert_eq!(borrow, 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::{bf_to_f64, RM};

    fn bf(x: f64) -> BigFloat {
        BigFloat::from_f64(x, 128)
    }

    #[test]
    fn push_rounds_to_scale() {
        let mut v = FixedVec::new(2, 8);
        v.push(&bf(1.5));
        v.push(&bf(-0.25));
        v.push(&bf(3.0 / 1024.0)); // rounds to 1/256
        v.push(&bf(0.0));
        assert_eq!(v.entry(0), &[384, 0]);
        assert_eq!(v.entry(1), &[64, 0]);
        assert!(v.neg[1]);
        assert_eq!(v.entry(2), &[1, 0]);
        assert!(v.is_zero_at(3));
    }

    #[test]
    fn convolution_matches_float_sum() {
        let fa = 150;
        let fw = 140;
        let mut a = FixedVec::new(4, fa);
        let mut w = FixedVec::new(3, fw);
        let av: Vec<f64> = (0..40).map(|i| if i % 3 == 0 { -1.0 } else { 1.0 } * (i as f64 + 0.5).sqrt() * 1e6).collect();
        let wv: Vec<f64> = (0..40).map(|m| 1.0 / ((m + 1) * (m + 2)) as f64).collect();
        for x in &av {
            a.push(&bf(*x));
        }
        for x in &wv {
            w.push(&bf(*x));
        }
        let k = 39;
        let mut acc = DotAccumulator::new(4, 3, fa + fw);
        acc.convolve(&a, &w, 1, k);
        let got = bf_to_f64(&acc.to_float());
        let mut exact = bf(0.0);
        for j in 1..=k {
            exact = exact.add(&bf(av[j]).mul(&bf(wv[k - j]), 256, RM), 256, RM);
        }
        assert!((got - bf_to_f64(&exact)).abs() < 1e-9 * got.abs());
    }

    #[test]
    fn large_shift_left() {
        let mut v = FixedVec::new(3, 100);
        v.push(&bf(12345.0));
        let mut w = FixedVec::new(2, 60);
        w.push(&bf(1.0));
        let mut acc = DotAccumulator::new(3, 2, 160);
        acc.convolve(&v, &w, 0, 0);
        assert_eq!(bf_to_f64(&acc.to_float()), 12345.0);
    }
}
