//! Compiles every code block in the guide as a documentation test, so the
//! book cannot drift from the library. Built only under `cargo test --doc`.

macro_rules! chapter {
    ($name:ident, $path:literal) => {
        #[doc = include_str!($path)]
        pub struct $name;
    };
}

chapter!(Introduction, "../../../book/src/introduction.md");
chapter!(ModularToolkit, "../../../book/src/modular-toolkit.md");
chapter!(Instances, "../../../book/src/instances.md");
chapter!(ConceptsAndOracles, "../../../book/src/concepts-and-oracles.md");
chapter!(QuantumLearners, "../../../book/src/quantum-learners.md");
chapter!(Reductions, "../../../book/src/reductions.md");
chapter!(PacHarness, "../../../book/src/pac-harness.md");
