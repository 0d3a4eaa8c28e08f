//! Small worked-example matrices shared by unit tests.

/// 10 x 5 matrix used throughout the ranking examples.
pub const EXAMPLE_D: &str = "1,1,1,2,1\n1,1,1,2,0\n0,0,0,3,0\n1,1,1,2,0\n1,0,1,1,1\n\
                             1,1,1,1,1\n1,1,1,3,0\n1,1,0,2,1\n1,0,1,1,0\n1,1,1,1,1\n";

/// 5 x 3 binary matrix.
pub const EXAMPLE_E: &str = "0,1,0\n1,1,0\n1,0,0\n0,1,1\n0,0,1\n";
