//! On-disk cache of subgroup lattices and automorphism groups.
//!
//! One file per group, `<id>-v1-lattice.json`. Files are written to a temporary name and
//! renamed into place; unreadable, corrupt or mismatched files are ignored.

use std::fs;
use std::path::{Path, PathBuf};

use fibered_core::group::{Elem, Group};
use serde::{Deserialize, Serialize};

const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    version: u32,
    id: String,
    order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subgroups: Option<Vec<Vec<Elem>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    automorphisms: Option<Vec<(Vec<Elem>, bool)>>,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> Cache {
        Cache { dir: dir.to_path_buf() }
    }

    fn path(&self, g: &Group) -> PathBuf {
        self.dir.join(format!("{}-v{VERSION}-lattice.json", g.id()))
    }

    fn read(&self, g: &Group) -> Option<Entry> {
        let text = fs::read_to_string(self.path(g)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        (e.version == VERSION && e.id == g.id().to_string() && e.order == g.order()).then_some(e)
    }

    /// Installs whatever the cache holds for `g`; returns whether anything was installed.
    pub fn load(&self, g: &Group) -> bool {
        let Some(e) = self.read(g) else { return false };
        let mut hit = false;
        if let Some(subs) = e.subgroups {
            if !g.lattice_cached() {
                hit |= g.install_lattice(subs).is_ok();
            }
        }
        if let Some(auts) = e.automorphisms {
            if !g.automorphisms_cached() {
                hit |= g.install_automorphisms(auts).is_ok();
            }
        }
        hit
    }

    /// Writes the lattice and automorphisms already computed for `g`.
    pub fn store(&self, g: &Group) -> std::io::Result<()> {
        let subgroups = g
            .lattice_cached()
            .then(|| g.lattice().ok())
            .flatten()
            .map(|l| l.subgroups().iter().map(|s| s.elems().to_vec()).collect());
        let automorphisms = g
            .automorphisms_cached()
            .then(|| fibered_core::group::automorphisms(g).ok())
            .flatten()
            .map(|a| a.iter().map(|x| (x.map.images().to_vec(), x.inner)).collect());
        if subgroups.is_none() && automorphisms.is_none() {
            return Ok(());
        }
        if let Some(old) = self.read(g) {
            if old.subgroups.is_some() >= subgroups.is_some() && old.automorphisms.is_some() >= automorphisms.is_some() {
                return Ok(());
            }
        }
        let e = Entry { version: VERSION, id: g.id().to_string(), order: g.order(), subgroups, automorphisms };
        fs::create_dir_all(&self.dir)?;
        let path = self.path(g);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&e).expect("cache entry JSON"))?;
        fs::rename(&tmp, &path)
    }
}
