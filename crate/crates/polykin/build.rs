fn main() {
    // Eigen-solves go through the system LAPACK (liblapack.so).
    println!("cargo:rustc-link-lib=dylib=lapack");
}
