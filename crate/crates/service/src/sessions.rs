use std::collections::HashMap;
use std::sync::{PoisonError, RwLock};

use chrono::{DateTime, Duration, Utc};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Session {
    pub token: String,
    pub student_id: String,
    pub exam_id: String,
    pub expires_at: DateTime<Utc>,
}

/// Student sessions, held in memory only.
#[derive(Debug)]
pub struct SessionRegistry {
    ttl: Duration,
    sessions: RwLock<HashMap<String, Session>>,
}

impl SessionRegistry {
    pub fn new(ttl_secs: u64) -> Self {
        Self {
            ttl: Duration::seconds(i64::try_from(ttl_secs).unwrap_or(i64::MAX / 1000)),
            sessions: RwLock::new(HashMap::new()),
        }
    }

    pub fn open(&self, student_id: &str, exam_id: &str) -> Session {
        let session = Session {
            token: uuid::Uuid::new_v4().simple().to_string(),
            student_id: student_id.to_string(),
            exam_id: exam_id.to_string(),
            expires_at: Utc::now() + self.ttl,
        };
        let mut sessions = self.sessions.write().unwrap_or_else(PoisonError::into_inner);
        let now = Utc::now();
        sessions.retain(|_, s| s.expires_at > now);
        sessions.insert(session.token.clone(), session.clone());
        session
    }

    /// The live session for `token`; expired and unknown tokens look the same.
    pub fn get(&self, token: &str) -> Option<Session> {
        self.get_at(token, Utc::now())
    }

    fn get_at(&self, token: &str, now: DateTime<Utc>) -> Option<Session> {
        self.sessions
            .read()
            .unwrap_or_else(PoisonError::into_inner)
            .get(token)
            .filter(|s| s.expires_at > now)
            .cloned()
    }
}
