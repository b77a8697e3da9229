//! Process-wide size caps keeping every computation at desk scale.

use std::sync::RwLock;

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Double description refuses inputs whose intermediate ray count exceeds this.
    pub max_rays: usize,
    /// Upper bound on the vertex count of any constructed polytope.
    pub max_vertices: usize,
    /// `check_pf_oracle` enumerates 2^k subsets and refuses k above this.
    pub oracle_vertices: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_rays: 200_000,
            max_vertices: 100_000,
            oracle_vertices: 16,
        }
    }
}

static CAPS: RwLock<Caps> = RwLock::new(Caps {
    max_rays: 200_000,
    max_vertices: 100_000,
    oracle_vertices: 16,
});

pub fn get() -> Caps {
    *CAPS.read().expect("caps lock poisoned")
}

pub fn set(caps: Caps) {
    *CAPS.write().expect("caps lock poisoned") = caps;
}

/// Parse an override string of the form `rays=N,vertices=N,oracle=N`;
/// unknown keys are rejected, omitted keys keep their current value.
pub fn parse_overrides(spec: &str, mut base: Caps) -> Result<Caps, String> {
    for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("malformed caps entry '{part}'"))?;
        let n: usize = value
            .trim()
            .parse()
            .map_err(|_| format!("malformed caps value '{value}'"))?;
        match key.trim() {
            "rays" => base.max_rays = n,
            "vertices" => base.max_vertices = n,
            "oracle" => base.oracle_vertices = n,
            other => return Err(format!("unknown caps key '{other}'")),
        }
    }
    Ok(base)
}
