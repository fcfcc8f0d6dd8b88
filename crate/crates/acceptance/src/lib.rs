//! Holds the `acceptance` test target; it runs after the core crate's own tests.
