fn main() {
    std::process::exit(uav_terrain::cli::main());
}
