fn main() {
    std::process::exit(cslam::cli::main());
}
