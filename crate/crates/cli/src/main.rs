use std::process::ExitCode;

fn main() -> ExitCode {
    match atrust_cli::run_from_args(std::env::args_os()) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            println!("wrote {}", outcome.out_dir.display());
            ExitCode::SUCCESS
        }
        Err(err) => {
            if let Some(clap_err) = err.downcast_ref::<clap::Error>() {
                let _ = clap_err.print();
                return ExitCode::from(u8::try_from(clap_err.exit_code()).unwrap_or(2));
            }
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
