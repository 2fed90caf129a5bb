use std::cmp::Ordering;

/// Exponents of the even variables plus the set of odd variables as a bitmask.
///
/// Ordering is by total degree, then lexicographic on the variable sequence
/// (even variables before odd, each in table order).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuperMonomial {
    pub even: Box<[u32]>,
    pub odd: u64,
}

impl SuperMonomial {
    pub fn one(n_even: usize) -> Self {
        SuperMonomial {
            even: vec![0; n_even].into_boxed_slice(),
            odd: 0,
        }
    }

    pub fn odd_only(n_even: usize, mask: u64) -> Self {
        SuperMonomial {
            even: vec![0; n_even].into_boxed_slice(),
            odd: mask,
        }
    }

    pub fn degree(&self) -> u32 {
        self.even.iter().sum::<u32>() + self.odd.count_ones()
    }

    pub fn odd_degree(&self) -> u32 {
        self.odd.count_ones()
    }

    pub fn parity(&self) -> u8 {
        (self.odd.count_ones() % 2) as u8
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.even.iter().all(|&e| e == 0)
    }

    /// Product with the Koszul sign; `None` when an odd variable repeats.
    pub fn mul(&self, other: &SuperMonomial) -> Option<(SuperMonomial, bool)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let even = self
            .even
            .iter()
            .zip(other.even.iter())
            .map(|(a, b)| a + b)
            .collect();
        let negative = reorder_sign(self.odd, other.odd);
        Some((
            SuperMonomial {
                even,
                odd: self.odd | other.odd,
            },
            negative,
        ))
    }
}

/// `true` when moving the odd factors of `right` past those of `left` into
/// canonical order takes an odd number of transpositions.
#[inline]
pub fn reorder_sign(left: u64, right: u64) -> bool {
    let mut count = 0u32;
    let mut r = right;
    while r != 0 {
        let j = r.trailing_zeros();
        r &= r - 1;
        let above = if j >= 63 { 0 } else { left >> (j + 1) };
        count += above.count_ones();
    }
    count % 2 == 1
}

/// Number of odd variables strictly before index `k` in `mask`.
#[inline]
pub fn odd_before(mask: u64, k: usize) -> u32 {
    (mask & ((1u64 << k) - 1)).count_ones()
}

/// Number of odd variables strictly after index `k` in `mask`.
#[inline]
pub fn odd_after(mask: u64, k: usize) -> u32 {
    if k >= 63 {
        0
    } else {
        (mask >> (k + 1)).count_ones()
    }
}

impl Ord for SuperMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| {
                for (a, b) in self.even.iter().zip(other.even.iter()) {
                    if a != b {
                        // more of an earlier variable sorts first
                        return b.cmp(a);
                    }
                }
                Ordering::Equal
            })
            .then_with(|| {
                let diff = self.odd ^ other.odd;
                if diff == 0 {
                    Ordering::Equal
                } else if self.odd & (diff & diff.wrapping_neg()) != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            })
    }
}

impl PartialOrd for SuperMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reorder_sign_counts_transpositions() {
        // eta1 * xi1 with xi1 = bit 0, eta1 = bit 1: one swap
        assert!(reorder_sign(0b10, 0b01));
        assert!(!reorder_sign(0b01, 0b10));
        // (xi1 eta1 at bits 0,2) * xi2 (bit 1): passes eta1 only
        assert!(reorder_sign(0b101, 0b010));
    }

    #[test]
    fn order_is_degree_then_lex() {
        let m = |e: &[u32], o: u64| SuperMonomial {
            even: e.to_vec().into_boxed_slice(),
            odd: o,
        };
        let mut v = vec![m(&[0, 1], 0), m(&[1, 0], 0), m(&[0, 0], 0b1), m(&[0, 0], 0)];
        v.sort();
        assert_eq!(v, vec![m(&[0, 0], 0), m(&[1, 0], 0), m(&[0, 1], 0), m(&[0, 0], 0b1)]);
        assert!(m(&[], 0b01) < m(&[], 0b10));
        assert!(m(&[], 0b011) < m(&[], 0b101));
        assert!(m(&[], 0b101) < m(&[], 0b110));
    }
}
