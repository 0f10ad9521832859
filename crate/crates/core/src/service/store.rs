use std::collections::HashMap;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use tokio::sync::Mutex;

use crate::session::{restore, CommandResponse, Session, SessionCommand, SessionConfig, SessionError};

/// One session: a queue-fair writer lock and the last published revision,
/// which readers use while a command is in flight.
struct Slot {
    writer: Mutex<Session>,
    published: RwLock<Arc<Session>>,
}

/// All live sessions, optionally persisted as one snapshot file per session.
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Slot>>>,
    data_dir: Option<PathBuf>,
    defaults: SessionConfig,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("no session with id `{0}`")]
    NotFound(String),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error("could not persist snapshot: {0}")]
    Io(#[from] io::Error),
}

impl SessionStore {
    pub fn new(data_dir: Option<PathBuf>, defaults: SessionConfig) -> Self {
        SessionStore { sessions: RwLock::new(HashMap::new()), data_dir, defaults }
    }

    /// Opens a store over `data_dir`, restoring every snapshot found there.
    /// Unreadable snapshots are skipped with a warning.
    pub fn open(data_dir: PathBuf, defaults: SessionConfig) -> io::Result<Self> {
        std::fs::create_dir_all(&data_dir)?;
        let store = SessionStore::new(Some(data_dir.clone()), defaults);
        let mut paths: Vec<PathBuf> = std::fs::read_dir(&data_dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for path in paths {
            match std::fs::read_to_string(&path).map_err(SessionError::from_io).and_then(|t| restore(&t)) {
                Ok(session) => store.insert(session),
                Err(e) => tracing::warn!(path = %path.display(), error = %e, "skipping snapshot"),
            }
        }
        Ok(store)
    }

    pub fn defaults(&self) -> SessionConfig {
        self.defaults
    }

    pub fn len(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.sessions.read().unwrap().keys().cloned().collect();
        ids.sort();
        ids
    }

    fn insert(&self, session: Session) {
        let slot = Slot { published: RwLock::new(Arc::new(session.clone())), writer: Mutex::new(session) };
        let id = slot.published.read().unwrap().id().to_string();
        self.sessions.write().unwrap().insert(id, Arc::new(slot));
    }

    pub fn create(&self, domain: &str, problem: &str, config: SessionConfig) -> Result<Arc<Session>, StoreError> {
        let session = Session::create(domain, problem, config)?;
        self.persist(&session)?;
        let published = Arc::new(session.clone());
        self.insert(session);
        Ok(published)
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, StoreError> {
        self.sessions.read().unwrap().get(id).cloned().ok_or_else(|| StoreError::NotFound(id.to_string()))
    }

    /// Latest published revision of a session.
    pub fn get(&self, id: &str) -> Result<Arc<Session>, StoreError> {
        Ok(self.slot(id)?.published.read().unwrap().clone())
    }

    /// Runs `f` as the session's single writer. Commands on one session
    /// run in arrival order; readers keep seeing the previous revision
    /// until `f` succeeds.
    pub async fn update<F>(&self, id: &str, f: F) -> Result<CommandResponse, StoreError>
    where
        F: FnOnce(&mut Session) -> Result<CommandResponse, SessionError>,
    {
        let slot = self.slot(id)?;
        let mut session = slot.writer.lock().await;
        let mut next = session.clone();
        let response = tokio::task::block_in_place(|| f(&mut next))?;
        self.persist(&next)?;
        *slot.published.write().unwrap() = Arc::new(next.clone());
        *session = next;
        Ok(response)
    }

    pub async fn command(&self, id: &str, cmd: SessionCommand) -> Result<CommandResponse, StoreError> {
        self.update(id, |s| s.handle(cmd)).await
    }

    fn persist(&self, session: &Session) -> io::Result<()> {
        let Some(dir) = &self.data_dir else {
            return Ok(());
        };
        write_atomic(&dir.join(format!("{}.json", session.id())), &session.to_snapshot_json())
    }

    /// Writes every published session to the data directory.
    pub fn flush(&self) -> io::Result<()> {
        let slots: Vec<Arc<Slot>> = self.sessions.read().unwrap().values().cloned().collect();
        for slot in slots {
            let session = slot.published.read().unwrap().clone();
            self.persist(&session)?;
        }
        Ok(())
    }
}

fn write_atomic(path: &Path, text: &str) -> io::Result<()> {
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)
}

impl SessionError {
    fn from_io(e: io::Error) -> SessionError {
        SessionError::InvalidSnapshot(e.to_string())
    }
}
