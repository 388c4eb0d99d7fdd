namespace __cxxabiv1 {

bool
__pointer_to_member_type_info::can_catch_nested(
    const __shim_type_info* thrown_type) const
{
    const __pointer_to_member_type_info* member_ptr_type =
        dynamic_cast<const __pointer_to_member_type_info*> (__pointee);
    if (member_ptr_type == 0)
        return false;
    return true;
}

}  // namespace __cxxabiv1
