namespace base {

size_t GetSystemCommitCharge() {
  base::mac::ScopedMachSendRight host(mach_host_self());
  mach_msg_type_number_t count = HOST_VM_INFO_COUNT;
  vm_statistics_data_t data;
  //check the total number of pages currently in use and pageable.
  kern_return_t kr = host_statistics(host.get(), HOST_VM_INFO,
      reinterpret_cast<host_info_t>(&data), &count);
  if (kr != KERN_SUCCESS)
    return 0;
  return (data.active_count * PAGE_SIZE) / 1024;
}

}  // namespace base
