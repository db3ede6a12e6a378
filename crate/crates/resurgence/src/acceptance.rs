//! Acceptance suite (stub).
