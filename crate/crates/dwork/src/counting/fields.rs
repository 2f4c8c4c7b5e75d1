use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{check_failed, Result};
use crate::ffield::{build_field, mod_inverse, Embedding, FieldTable, FqElem};

use super::RootCountTable;

/// `F_{Q^d}` over `F_Q` with a generator `Gamma = G^gamma_exp` whose norm is
/// the generator `h` of `F_Q`.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub big: Arc<FieldTable>,
    pub gamma_exp: u64,
    /// `(Q^d - 1)/(Q - 1)`.
    pub norm_exp: u64,
    /// `k` with `h = G^(norm_exp k)`.
    pub k: u64,
    k_inv: u64,
    small_order: u64,
}

impl ExtensionData {
    /// Element of the big field lying in `F_Q`, as an `F_Q` element.
    pub fn restrict(&self, y: FqElem) -> Result<FqElem> {
        let Some(i) = y.index() else {
            return Ok(FqElem::ZERO);
        };
        let i = i as u64;
        if !i.is_multiple_of(self.norm_exp) {
            return Err(check_failed("value expected in the base field"));
        }
        Ok(FqElem::from_index(
            ((i / self.norm_exp) as u128 * self.k_inv as u128 % self.small_order as u128) as u32,
        ))
    }
}

/// Lazily built field tables, embeddings and root tables for one `q`.
#[derive(Debug)]
pub struct FieldCache {
    q: u32,
    fields: Mutex<HashMap<u32, Arc<FieldTable>>>,
    extensions: Mutex<HashMap<(u32, u32), Arc<ExtensionData>>>,
    tables: Mutex<HashMap<(u32, u32), Arc<RootCountTable>>>,
    zeta: Mutex<HashMap<(u32, u32), u32>>,
}

impl FieldCache {
    pub fn new(q: u32) -> FieldCache {
        FieldCache {
            q,
            fields: Mutex::new(HashMap::new()),
            extensions: Mutex::new(HashMap::new()),
            tables: Mutex::new(HashMap::new()),
            zeta: Mutex::new(HashMap::new()),
        }
    }

    /// `F_{q^k}`.
    pub fn field(&self, k: u32) -> Result<Arc<FieldTable>> {
        if let Some(f) = self.fields.lock().expect("lock").get(&k) {
            return Ok(f.clone());
        }
        let f = Arc::new(build_field(self.q, k)?);
        Ok(self
            .fields
            .lock()
            .expect("lock")
            .entry(k)
            .or_insert(f)
            .clone())
    }

    pub fn root_table(&self, r: u32, n: u32) -> Result<Arc<RootCountTable>> {
        if let Some(t) = self.tables.lock().expect("lock").get(&(r, n)) {
            return Ok(t.clone());
        }
        let t = Arc::new(RootCountTable::build(&*self.field(r)?, n)?);
        Ok(self
            .tables
            .lock()
            .expect("lock")
            .entry((r, n))
            .or_insert(t)
            .clone())
    }

    /// `j` with `zeta = h^((Q-1) j / n)` in `F_Q = F_{q^r}`.
    pub fn zeta_multiplier(&self, r: u32, n: u32) -> Result<u32> {
        if let Some(&j) = self.zeta.lock().expect("lock").get(&(r, n)) {
            return Ok(j);
        }
        let base = self.field(1)?;
        let big = self.field(r)?;
        let zeta = FqElem::from_index(base.order() / n);
        let idx = Embedding::new(&base, &big)?
            .apply(zeta)
            .index()
            .expect("unit") as u64;
        let step = big.order() as u64 / n as u64;
        debug_assert_eq!(idx % step, 0);
        let j = (idx / step) as u32;
        self.zeta.lock().expect("lock").insert((r, n), j);
        Ok(j)
    }

    /// `F_{Q^d}` over `F_Q = F_{q^r}` with a norm-compatible generator.
    pub fn extension(&self, r: u32, d: u32) -> Result<Arc<ExtensionData>> {
        if let Some(e) = self.extensions.lock().expect("lock").get(&(r, d)) {
            return Ok(e.clone());
        }
        let small = self.field(r)?;
        let big = self.field(r * d)?;
        let emb = Embedding::new(&small, &big)?;
        let small_order = small.order() as u64;
        let big_order = big.order() as u64;
        let k = emb.multiplier() % small_order.max(1);
        let k_inv = mod_inverse(k, small_order)
            .ok_or_else(|| check_failed("embedding multiplier not a unit"))?;
        let gamma_exp = (0..)
            .map(|m| k + m * small_order)
            .find(|&s| crate::arith::gcd(s, big_order) == 1)
            .expect("a unit exists in every residue class mod Q - 1");
        let ext = Arc::new(ExtensionData {
            big,
            gamma_exp,
            norm_exp: big_order / small_order,
            k,
            k_inv,
            small_order,
        });
        Ok(self
            .extensions
            .lock()
            .expect("lock")
            .entry((r, d))
            .or_insert(ext)
            .clone())
    }
}
