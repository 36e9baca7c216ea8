//! On-disk JSON cache: one file per key, a single writer at a time.

use std::fs::{self, File, OpenOptions};
use std::io;
use std::path::{Path, PathBuf};

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Cache {
            dir: dir.to_path_buf(),
        })
    }

    fn lock_file(&self) -> io::Result<File> {
        OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(self.dir.join(".lock"))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> io::Result<Option<String>> {
        let lock = self.lock_file()?;
        lock.lock_shared()?;
        let r = match fs::read_to_string(self.path(key)) {
            Ok(s) => Ok(Some(s)),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e),
        };
        lock.unlock()?;
        r
    }

    /// Write through a temporary file and rename, so readers never see a partial entry.
    pub fn put(&self, key: &str, contents: &str) -> io::Result<()> {
        let lock = self.lock_file()?;
        lock.lock()?;
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        let r = fs::write(&tmp, contents).and_then(|_| fs::rename(&tmp, self.path(key)));
        lock.unlock()?;
        r
    }
}
