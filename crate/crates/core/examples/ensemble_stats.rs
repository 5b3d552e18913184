//! Quick ensemble statistics check: mean participation ratio per
//! family at a chosen size. Used to validate generator defaults.

use rayon::prelude::*;
use tmbasis::datagen::{FamilyParams, TmDataset};
use tmbasis::matrix::{participation_ratio, TmFamily};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(78);
    let count: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(200);

    for family in [TmFamily::Physical, TmFamily::Forward, TmFamily::Roundtrip] {
        let params = FamilyParams::with_defaults(family, n, 1234);
        let start = std::time::Instant::now();
        let ps: Vec<f64> = (0..count)
            .into_par_iter()
            .map(|i| {
                let tm = params.generate_item(tmbasis::util::splitmix64(1234, i as u64)).unwrap();
                participation_ratio(&tm).unwrap()
            })
            .collect();
        let mean = ps.iter().sum::<f64>() / count as f64;
        let var = ps.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / count as f64;
        println!(
            "{:9} n={n} count={count}: mean p = {mean:.4} +- {:.4}  ({:.1?})",
            family.as_str(),
            var.sqrt(),
            start.elapsed()
        );
    }
    let _ = TmDataset::from_parts;
}
