namespace media {

static int NumberOfPhysicalProcessors() {
  mac::ScopedMachSendRight mach_host(mach_host_self());
  host_basic_info hbi = {};
  mach_msg_type_number_t info_count = HOST_BASIC_INFO_COUNT;
  //retrieve the number of current physical processors
  kern_return_t kr = host_info(mach_host.get(), HOST_BASIC_INFO,
      reinterpret_cast<host_info_t>(&hbi), &info_count);
  return kr == KERN_SUCCESS ? hbi.physical_cpu : 1;
}

}  // namespace media
