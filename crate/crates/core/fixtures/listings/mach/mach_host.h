extern "C" {

kern_return_t host_statistics(host_t host_priv, host_flavor_t
    flavor, host_info_t host_info_out,
    mach_msg_type_number_t *host_info_outCnt);

kern_return_t host_info (host_t host, host_flavor_t flavor,
    host_info_t host_info_out,
    mach_msg_type_number_t *host_info_outCnt);

}
