//! Parabolic germs (stub).
