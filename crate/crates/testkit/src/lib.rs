//! Test oracles and randomized generators (placeholder while scaffolding).
