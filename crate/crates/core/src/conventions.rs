//! The sign and normalisation choices every computed result depends on.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::poisson::calibration;
use crate::zoo::density_sign;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConventionRecord {
    pub bracket: String,
    pub berezin: String,
    pub monomial_order: String,
    pub clifford: String,
    pub qtr: String,
    pub invariant_form: String,
    pub coadjoint: String,
    pub volume_density: String,
}

impl ConventionRecord {
    pub fn current() -> Self {
        ConventionRecord {
            bracket: calibration().chosen.describe(),
            berezin: "integral of xi1..xin eta1..etan (odd m: th1..thm) in table order is 1".into(),
            monomial_order: "total degree, then lexicographic with even variables first".into(),
            clifford: "coefficients left of words; Fock entries right of basis vectors".into(),
            qtr: "coefficient of the top odd-generator product".into(),
            invariant_form: "B(f,g) = int f g; B({f,g},h) = B(f,{g,h})".into(),
            coadjoint: "derivation induced by f -> [x,f] on coordinates of the generic even element".into(),
            volume_density: format!("{:?}", density_sign()),
        }
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("record serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

pub fn convention_hash() -> String {
    ConventionRecord::current().hash()
}
