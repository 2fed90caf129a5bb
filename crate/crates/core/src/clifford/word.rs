use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::supercore::odd_after;

/// Normal-ordered word `xî_I etâ_J`, subsets stored as bitmasks over `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CliffordWord {
    pub xi: u32,
    pub eta: u32,
}

impl CliffordWord {
    pub const ONE: CliffordWord = CliffordWord { xi: 0, eta: 0 };

    pub fn new(xi: u32, eta: u32) -> Self {
        CliffordWord { xi, eta }
    }

    pub fn len(self) -> u32 {
        self.xi.count_ones() + self.eta.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.xi == 0 && self.eta == 0
    }

    pub fn parity(self) -> u8 {
        (self.len() % 2) as u8
    }

    /// Dense index in `0..4^n`.
    pub fn index(self, n: usize) -> usize {
        (self.xi as usize) | ((self.eta as usize) << n)
    }

    pub fn from_index(i: usize, n: usize) -> Self {
        let mask = (1usize << n) - 1;
        CliffordWord::new((i & mask) as u32, (i >> n) as u32)
    }

    pub fn label(self, n: usize) -> String {
        let mut s = String::new();
        for i in 0..n {
            if self.xi & (1 << i) != 0 {
                s.push_str(&format!("XI{}", i + 1));
            }
        }
        for i in 0..n {
            if self.eta & (1 << i) != 0 {
                s.push_str(&format!("ETA{}", i + 1));
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

/// One term of a word product: `sign * h^power * word`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WordTerm {
    pub word: CliffordWord,
    pub negative: bool,
    pub power: u32,
}

/// Right multiplication of a word by a single generator.
fn times_xi(w: CliffordWord, k: usize, out: &mut Vec<WordTerm>, negative: bool, power: u32) {
    let bit = 1u32 << k;
    // pass xî_k through etâ_J
    let flips = w.eta.count_ones() % 2 == 1;
    if w.xi & bit == 0 {
        let extra = odd_after(w.xi as u64, k) % 2 == 1;
        out.push(WordTerm {
            word: CliffordWord::new(w.xi | bit, w.eta),
            negative: negative ^ flips ^ extra,
            power,
        });
    }
    if w.eta & bit != 0 {
        // contraction etâ_k xî_k -> h
        let after = odd_after(w.eta as u64, k) % 2 == 1;
        out.push(WordTerm {
            word: CliffordWord::new(w.xi, w.eta & !bit),
            negative: negative ^ after,
            power: power + 1,
        });
    }
}

fn times_eta(w: CliffordWord, k: usize, out: &mut Vec<WordTerm>, negative: bool, power: u32) {
    let bit = 1u32 << k;
    if w.eta & bit != 0 {
        return;
    }
    let extra = odd_after(w.eta as u64, k) % 2 == 1;
    out.push(WordTerm {
        word: CliffordWord::new(w.xi, w.eta | bit),
        negative: negative ^ extra,
        power,
    });
}

/// Normal-ordered expansion of `a * b`.
pub fn word_product(a: CliffordWord, b: CliffordWord) -> Vec<WordTerm> {
    let mut cur = vec![WordTerm {
        word: a,
        negative: false,
        power: 0,
    }];
    let mut gens = Vec::new();
    for k in 0..32 {
        if b.xi & (1 << k) != 0 {
            gens.push((true, k));
        }
    }
    for k in 0..32 {
        if b.eta & (1 << k) != 0 {
            gens.push((false, k));
        }
    }
    for (is_xi, k) in gens {
        let mut next = Vec::with_capacity(cur.len() * 2);
        for t in &cur {
            if is_xi {
                times_xi(t.word, k, &mut next, t.negative, t.power);
            } else {
                times_eta(t.word, k, &mut next, t.negative, t.power);
            }
        }
        cur = next;
    }
    // combine duplicates (a word can be reached along several contraction paths)
    let mut acc: HashMap<(CliffordWord, u32), i64> = HashMap::new();
    for t in cur {
        *acc.entry((t.word, t.power)).or_default() += if t.negative { -1 } else { 1 };
    }
    let mut out: Vec<WordTerm> = acc
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|((word, power), c)| {
            assert!(c.abs() == 1, "normal ordering produced multiplicity {c}");
            WordTerm {
                word,
                negative: c < 0,
                power,
            }
        })
        .collect();
    out.sort_by_key(|t| (t.word, t.power));
    out
}

/// Precomputed products of all basis words for a given `n`.
pub struct ProductTable {
    pub n: usize,
    table: Vec<Vec<WordTerm>>,
}

impl ProductTable {
    fn build(n: usize) -> Self {
        let size = 1usize << (2 * n);
        let mut table = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                table.push(word_product(
                    CliffordWord::from_index(i, n),
                    CliffordWord::from_index(j, n),
                ));
            }
        }
        ProductTable { n, table }
    }

    pub fn get(&self, a: CliffordWord, b: CliffordWord) -> &[WordTerm] {
        let size = 1usize << (2 * self.n);
        &self.table[a.index(self.n) * size + b.index(self.n)]
    }

    /// Shared table; built on first use. Tables above `n = 4` are not cached.
    pub fn shared(n: usize) -> Option<Arc<ProductTable>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ProductTable>>>> = OnceLock::new();
        if n > 4 {
            return None;
        }
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("table cache poisoned");
        Some(guard.entry(n).or_insert_with(|| Arc::new(ProductTable::build(n))).clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi(k: u32) -> CliffordWord {
        CliffordWord::new(1 << (k - 1), 0)
    }
    fn eta(k: u32) -> CliffordWord {
        CliffordWord::new(0, 1 << (k - 1))
    }

    #[test]
    fn eta_xi_relation() {
        let p = word_product(eta(1), xi(1));
        assert_eq!(
            p,
            vec![
                WordTerm { word: CliffordWord::ONE, negative: false, power: 1 },
                WordTerm { word: CliffordWord::new(1, 1), negative: true, power: 0 },
            ]
        );
        assert!(word_product(xi(1), xi(1)).is_empty());
        assert!(word_product(eta(2), eta(2)).is_empty());
        // eta2 xi1 = -xi1 eta2
        assert_eq!(
            word_product(eta(2), xi(1)),
            vec![WordTerm { word: CliffordWord::new(1, 2), negative: true, power: 0 }]
        );
    }

    #[test]
    fn xi_eta_squared() {
        let w = CliffordWord::new(1, 1);
        assert_eq!(
            word_product(w, w),
            vec![WordTerm { word: w, negative: false, power: 1 }]
        );
    }

    #[test]
    fn xi_after_xi_sign() {
        // xi2 * xi1 = -xi1 xi2
        assert_eq!(
            word_product(xi(2), xi(1)),
            vec![WordTerm { word: CliffordWord::new(3, 0), negative: true, power: 0 }]
        );
    }
}
