//! Run the complete verification suite and print both report forms.

use enriques_ihc::paperlab::{run_verification, VerifyOptions};

fn main() {
    let opts = VerifyOptions::default();
    match run_verification(&opts) {
        Ok(report) => {
            print!("{}", report.render_human());
            println!();
            println!("structured report:");
            print!("{}", report.render_structured());
        }
        Err(e) => {
            eprintln!("verification could not run: {e}");
            std::process::exit(1);
        }
    }
}
