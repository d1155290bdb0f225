//! Placeholder; filled in once the library surface is complete.
pub fn run() -> i32 {
    0
}
