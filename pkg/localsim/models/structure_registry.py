import os
from collections import OrderedDict
from enum import IntEnum

import localsim
from localsim.utils.errors import ValidationError


class GroupType(IntEnum):
    """
    Enum for the named groups shipped with localsim
    """

    VD2 = 0
    V3 = 1
    VD2_SIGMA2 = 2
    V3_CYCLIC = 3
    MIRROR = 4
    VD2_MINUS = 5
    FINITE_S3 = 6
    FINITE_SWAPS = 7
    FINITE_TRIVIAL = 8

    # negative values correspond to groups (see GROUP_GROUPS_TO_IDS)
    ALL = -1
    DUALLY_CONTRACTING = -2
    FINITE = -3


GROUP_GROUPS_TO_IDS = {
    -1: list(range(len(GroupType) - 3)),  # all
    -2: [0, 1, 2, 3],
    -3: [6, 7, 8],
}


def path_completion(path, root):
    """
    Returns @path unchanged if it is absolute or exists, otherwise @path joined to @root
    """
    if os.path.isabs(path) or os.path.exists(path):
        return path
    return os.path.join(root, path)


def get_group_path(group_id):
    """
    Get corresponding descriptor filepath (yaml) for a named group

    Args:
        group_id (int or GroupType or str): group id (int, enum or lower case name)

    Return:
        str: yaml path for specified group
    """
    if isinstance(group_id, GroupType):
        group_name = group_id.name.lower()
    elif isinstance(group_id, int):
        group_int_to_name = dict(
            map(lambda item: (item.value, item.name.lower()), GroupType)
        )
        group_name = group_int_to_name[group_id]
    elif isinstance(group_id, str) and group_id.upper() in GroupType.__members__:
        group_name = group_id.lower()
    else:
        raise ValidationError('unknown group "{}"'.format(group_id))

    return path_completion(
        f"groups/{group_name}.yaml",
        root=localsim.models.assets_root,
    )


def get_element_path(name):
    """
    Path of an element file: @name itself if it exists, otherwise the shipped element of that name
    """
    if os.path.exists(name):
        return name
    return path_completion(f"elements/{name}", root=localsim.models.assets_root)


def resolve_group(group):
    """
    A --group argument is a registry name or a path to a descriptor file
    """
    if os.path.exists(group):
        return group
    return get_group_path(group)


def unpack_group_ids(group_ids):
    if group_ids is None:
        group_ids = GroupType.ALL

    if not isinstance(group_ids, list):
        group_ids = [group_ids]

    group_ids = [int(id) for id in group_ids]

    all_group_ids = []
    for id in group_ids:
        if id < 0:
            all_group_ids += GROUP_GROUPS_TO_IDS[id]
        else:
            all_group_ids.append(id)
    return [GroupType(id) for id in OrderedDict.fromkeys(all_group_ids)]
