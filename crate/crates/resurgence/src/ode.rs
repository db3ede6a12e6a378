//! Nonlinear ODE (stub).
