//! Text tensor format: header `tensor <d> <n1> ... <nd>`, then the entries
//! with the first index running fastest, written with 17 significant digits.
//!
//! `cargo run --example tensor_io`

use antisym::io::{from_text, to_text};
use antisym::problems::random_antisymmetric;

fn main() -> antisym::Result<()> {
    let a = random_antisymmetric(3, 3, 5);
    let text = to_text(&a);
    println!("{}", text.lines().take(3).collect::<Vec<_>>().join("\n"));
    let b = from_text(&text)?;
    println!("bitwise round trip: {}", a.data() == b.data());
    Ok(())
}
