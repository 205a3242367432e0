//! Classify a sweep of starting heights λ.

use rotsurf::shooting::{portrait, ClassifyConfig};

fn main() {
    let lambdas: Vec<f64> = (0..12).map(|k| 1.1 + 0.4 * k as f64).collect();
    let report = portrait(&lambdas, &ClassifyConfig::default()).unwrap();
    println!("lambda0 = {:.12}", report.lambda0.value);
    for entry in &report.entries {
        match &entry.class {
            Ok(class) => println!("{:6.3}  {:<15} {class:?}", entry.lambda, class.name()),
            Err(e) => println!("{:6.3}  error: {e}", entry.lambda),
        }
    }
}
