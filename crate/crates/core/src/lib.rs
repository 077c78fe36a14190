//! Quasi-Monte Carlo sampling: bit-exact unit-interval conversion, radical
//! inversion with digit scrambling, Sobol' sequences, rank-1 lattice
//! sequences and image-plane sampler constructions, plus uniformity and
//! integration checks.

pub mod digitalnet;
pub mod error;
pub mod imageplane;
pub mod lattice;
pub mod quality;
pub mod radical;
pub mod unitfloat;

pub use digitalnet::{build_matrices, parse_direction_numbers, GeneratorMatrixSet, SobolIndex};
pub use error::{Error, Result};
pub use imageplane::stream::{make_stream, PointSource, SampleStream, Sampler, SamplerKind, SamplerParams};
pub use imageplane::{PixelCoord, XorTables};
pub use lattice::{check_admissible, parse_generator_vector, AdmissibilityReport, GeneratorVector};
pub use quality::{AccumMode, Accumulator, IntegrationReport, TestIntegrand};
pub use radical::{DigitPermutation, HaltonMode, MultiDigitTable, ScrambleFactor};
pub use unitfloat::{map_u32_to_unifloat, UnitValue};
