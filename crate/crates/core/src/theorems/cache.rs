use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use crate::bockstein::{BocksteinError, BocksteinSequence};
use crate::cohomology::{integral_cohomology, modp_cohomology, CohomologyError, CohomologyResult, ModpCohomologyResult};
use crate::lattice::valuation;

/// Write-once slots: the map lock is only held to find the slot, so two
/// threads asking for different keys compute concurrently, and two threads
/// asking for the same key compute it once.
struct Memo<K, V> {
    slots: Mutex<HashMap<K, Arc<OnceLock<V>>>>,
}

impl<K: Eq + Hash + Clone, V: Clone> Memo<K, V> {
    fn new() -> Self {
        Memo {
            slots: Mutex::new(HashMap::new()),
        }
    }

    fn get(&self, key: &K, init: impl FnOnce() -> V) -> V {
        let slot = {
            let mut slots = self.slots.lock().expect("memo lock");
            slots.entry(key.clone()).or_default().clone()
        };
        slot.get_or_init(init).clone()
    }
}

/// Shared results for one verification run.
pub struct Cache {
    integral: Memo<(usize, usize), Arc<CohomologyResult>>,
    modp: Memo<(usize, usize, u64), Result<Arc<ModpCohomologyResult>, CohomologyError>>,
    sequences: Memo<(usize, usize, u64), Result<Arc<BocksteinSequence>, BocksteinError>>,
}

impl Default for Cache {
    fn default() -> Self {
        Self::new()
    }
}

impl Cache {
    pub fn new() -> Self {
        Cache {
            integral: Memo::new(),
            modp: Memo::new(),
            sequences: Memo::new(),
        }
    }

    pub fn integral(&self, r: usize, n: usize) -> Arc<CohomologyResult> {
        self.integral.get(&(r, n), || Arc::new(integral_cohomology(r, n)))
    }

    pub fn modp(&self, r: usize, n: usize, p: u64) -> Result<Arc<ModpCohomologyResult>, CohomologyError> {
        self.modp
            .get(&(r, n, p), || modp_cohomology(r, n, p).map(Arc::new))
    }

    /// Pages `1..=max(ν_p(n) + 1, 2)`, enough for every check in the harness.
    pub fn sequence(&self, r: usize, n: usize, p: u64) -> Result<Arc<BocksteinSequence>, BocksteinError> {
        self.sequences.get(&(r, n, p), || {
            let modp = self.modp(r, n, p)?;
            if n == 0 {
                return Err(BocksteinError::ZeroDegree);
            }
            let kmax = (valuation(&BigInt::from(n), p) as usize + 1).max(2);
            BocksteinSequence::from_parts(self.integral(r, n), modp, kmax).map(Arc::new)
        })
    }
}
