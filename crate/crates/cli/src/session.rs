//! Loading, verifying and saving the dimension cache around a command.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use sl2coh::cache_file;
use sl2coh::DimCache;

use crate::{Failure, GlobalOpts};

pub struct Session {
    path: Option<PathBuf>,
    pub cache: DimCache,
}

impl Session {
    /// A missing cache file starts an empty cache; an unreadable one is an error.
    pub fn open(opts: &GlobalOpts) -> Result<Session, Failure> {
        let cache = match &opts.cache_file {
            Some(path) if path.exists() => read(path)?,
            _ => DimCache::new(),
        };
        if opts.verify_cache {
            let checked = cache_file::verify(&cache).map_err(|err| Failure::Io(err.into()))?;
            eprintln!("cache: verified {checked} entries");
        }
        Ok(Session {
            path: opts.cache_file.clone(),
            cache,
        })
    }

    pub fn require_path(&self) -> Result<&Path, Failure> {
        self.path
            .as_deref()
            .ok_or_else(|| Failure::Usage(anyhow!("this command needs --cache-file")))
    }

    pub fn close(self) -> Result<(), Failure> {
        let stats = self.cache.stats();
        eprintln!(
            "cache: {} entries, {} hits, {} misses",
            self.cache.len(),
            stats.hits,
            stats.misses
        );
        if let Some(path) = &self.path {
            cache_file::save_to_path(&self.cache, path)
                .with_context(|| format!("saving cache to {}", path.display()))
                .map_err(Failure::Io)?;
        }
        Ok(())
    }
}

pub fn read(path: &Path) -> Result<DimCache, Failure> {
    cache_file::load_from_path(path)
        .with_context(|| format!("reading cache {}", path.display()))
        .map_err(Failure::Io)
}
