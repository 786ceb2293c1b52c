use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mut stdin = std::io::stdin().lock();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let stderr = std::io::stderr();
    let mut err = stderr.lock();
    let code = purenash::cli::cli_main(&args, &mut stdin, &mut out, &mut err);
    let _ = out.flush();
    let _ = err.flush();
    std::process::exit(code);
}
