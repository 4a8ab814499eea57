use crate::{OrbitData, OrbitError};
use parking_lot::RwLock;
use params_core::Params;
use std::collections::HashMap;
use std::sync::Arc;

/// Shared store of integrated orbits keyed by σ.
///
/// With `resolution > 0`, σ is snapped to the nearest multiple before lookup
/// and the orbit is built at the snapped value. Entries are inserted whole, so
/// concurrent readers never see a partially built orbit.
#[derive(Debug)]
pub struct OrbitCache {
    params: Params,
    resolution: f64,
    map: RwLock<HashMap<u64, Arc<OrbitData>>>,
}

impl OrbitCache {
    pub fn new(params: Params, resolution: f64) -> Self {
        OrbitCache { params, resolution: resolution.max(0.0), map: RwLock::new(HashMap::new()) }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn bucket(&self, sigma: f64) -> f64 {
        if self.resolution > 0.0 {
            (sigma / self.resolution).round() * self.resolution
        } else {
            sigma
        }
    }

    pub fn get(&self, sigma: f64) -> Result<Arc<OrbitData>, OrbitError> {
        let key_sigma = self.bucket(sigma);
        let key = key_sigma.to_bits();
        if let Some(d) = self.map.read().get(&key) {
            return Ok(d.clone());
        }
        let built = Arc::new(OrbitData::build(&self.params, key_sigma)?);
        Ok(self.map.write().entry(key).or_insert(built).clone())
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.map.write().clear();
    }
}
