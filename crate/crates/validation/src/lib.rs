//! Holds the `acceptance` test target (`cargo test -p biphoton-validation`);
//! there is no library code.
