use std::path::PathBuf;
use std::sync::Arc;

use dashmap::DashMap;
use num_complex::Complex64;

use super::{solve_bethe_level, BetheRootSet, RingGeometry, RootSolverConfig};
use crate::error::Result;

/// Environment variable naming a directory for persisted root sets.
pub const CACHE_DIR_ENV: &str = "PTASEP_ROOT_CACHE";

/// Write-once, read-shared store of root sets keyed by the exact bits of the
/// level `z^L`. Quadrature nodes are recomputed identically on every pass, so
/// exact keys hit whenever the same node is revisited.
#[derive(Debug)]
pub struct RootCache {
    geom: RingGeometry,
    cfg: RootSolverConfig,
    map: DashMap<(u64, u64), Arc<BetheRootSet>>,
    dir: Option<PathBuf>,
}

impl RootCache {
    pub fn new(geom: RingGeometry, cfg: RootSolverConfig) -> Self {
        let dir = std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from);
        Self { geom, cfg, map: DashMap::new(), dir }
    }

    pub fn geom(&self) -> RingGeometry {
        self.geom
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Root set at level `z^L`, solving on first use.
    pub fn get(&self, level: Complex64) -> Result<Arc<BetheRootSet>> {
        let key = (level.re.to_bits(), level.im.to_bits());
        if let Some(rs) = self.map.get(&key) {
            return Ok(rs.clone());
        }
        let rs = match self.load(key) {
            Some(rs) => rs,
            None => {
                let rs = solve_bethe_level(self.geom, level, &self.cfg)?;
                self.store(key, &rs);
                rs
            }
        };
        Ok(self.map.entry(key).or_insert_with(|| Arc::new(rs)).clone())
    }

    fn path(&self, key: (u64, u64)) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let name = format!(
            "roots_L{}_N{}_{:016x}_{:016x}_tol{:e}.json",
            self.geom.l, self.geom.n, key.0, key.1, self.cfg.tol
        );
        Some(dir.join(name))
    }

    fn load(&self, key: (u64, u64)) -> Option<BetheRootSet> {
        let text = std::fs::read_to_string(self.path(key)?).ok()?;
        serde_json::from_str(&text).ok()
    }

    fn store(&self, key: (u64, u64), rs: &BetheRootSet) {
        // persistence is best effort: a failed write only costs a recompute
        if let Some(path) = self.path(key) {
            if let Ok(text) = serde_json::to_string(rs) {
                let _ = std::fs::create_dir_all(path.parent().unwrap_or(&path));
                let _ = std::fs::write(path, text);
            }
        }
    }
}
