use std::sync::{Arc, Mutex, MutexGuard};

use cp1_core::toda::{Engine, InvariantKey};
use cp1_core::{MultiSeries, Rational, TruncationSpec};

/// An [`Engine`] shared between threads. Requests are serialized, so a
/// series is never computed twice concurrently and later requests reuse it.
#[derive(Clone, Debug, Default)]
pub struct SharedEngine(Arc<Mutex<Engine>>);

impl SharedEngine {
    pub fn new(engine: Engine) -> Self {
        SharedEngine(Arc::new(Mutex::new(engine)))
    }

    pub fn lock(&self) -> MutexGuard<'_, Engine> {
        self.0.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    pub fn gw_invariant(&self, key: &InvariantKey) -> cp1_core::Result<Rational> {
        self.lock().gw_invariant(key)
    }

    pub fn multipoint(
        &self,
        d: u32,
        y_vars: &[&str],
        z_vars: &[&str],
        spec: &TruncationSpec,
    ) -> cp1_core::Result<MultiSeries> {
        self.lock().multipoint(d, y_vars, z_vars, spec)
    }
}
