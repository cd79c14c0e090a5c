use crate::modres::FreeResolution;

use super::word::Gen;

/// Canonical words of `k` letters and total degree `m`, letters drawn from
/// levels 1..=ranks.len() (ranks[i-1] generators at level i), in
/// lexicographic order.
pub fn enumerate_words_ranks(ranks: &[usize], k: usize, m: i32) -> Vec<Vec<Gen>> {
    let mut out = Vec::new();
    if m > 0 {
        return out;
    }
    let mut acc = Vec::with_capacity(k);
    rec(ranks, k, (-m) as u32, None, &mut acc, &mut out);
    out
}

fn rec(ranks: &[usize], k: usize, remaining: u32, prev: Option<Gen>, acc: &mut Vec<Gen>, out: &mut Vec<Vec<Gen>>) {
    if acc.len() == k {
        if remaining == 0 {
            out.push(acc.clone());
        }
        return;
    }
    let left = (k - acc.len()) as u32;
    for (li, &r) in ranks.iter().enumerate() {
        let level = li as u32 + 1;
        // every remaining letter has level ≥ this one
        if level * left > remaining {
            break;
        }
        for j in 0..r as u32 {
            let g = Gen::new(level, j);
            if let Some(p) = prev {
                if g < p || (g == p && g.is_odd()) {
                    continue;
                }
            }
            acc.push(g);
            rec(ranks, k, remaining - level, Some(g), acc, out);
            acc.pop();
        }
    }
}

pub fn enumerate_words(res: &FreeResolution, k: usize, m: i32) -> Vec<Vec<Gen>> {
    enumerate_words_ranks(&res.ranks(), k, m)
}

/// All canonical words of `k` letters whose degree lies in [m_lo, m_hi].
pub fn enumerate_words_window(ranks: &[usize], k: usize, m_lo: i32, m_hi: i32) -> Vec<Vec<Gen>> {
    let mut out = Vec::new();
    for m in (m_lo..=m_hi).rev() {
        out.extend(enumerate_words_ranks(ranks, k, m));
    }
    out
}
