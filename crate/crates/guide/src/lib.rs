//! Doc-tests for the book: every chapter is included here so that its Rust
//! snippets compile and run under `cargo test`.

macro_rules! chapter {
    ($name:ident, $file:literal) => {
        #[cfg(doctest)]
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        pub mod $name {}
    };
}

chapter!(introduction, "introduction.md");
chapter!(exterior, "exterior.md");
chapter!(ideals, "ideals.md");
chapter!(initial, "initial.md");
chapter!(resolutions, "resolutions.md");
chapter!(arrangements, "arrangements.md");
chapter!(resonance, "resonance.md");
chapter!(graphs, "graphs.md");
chapter!(cli, "cli.md");
