"""Expected artifacts for the bundled inventory-system model.

The published case study spells atoms and states loosely ("/Validated User (U)",
"exist(i)" next to "/Exist (i)", "Add item (i) to Purchase Requisition").
The bundled model and these expectations use one canonical spelling each:

    PR Request                          -> PR_Request
    Validated User (U)                  -> Validated_User(U)
    add_PR(i) / Add_PR(i)               -> Add_PR(i)
    exist(i) / Exist (i)                -> Exist(i)
    add(i) / Add(i)                     -> Add(i)
    Completed Purchase_Requisition      -> Completed_Purchase_Requisition (same for the other four)
    Display Purchase Requisition Screen -> Display_PR_Screen
    Add item (i) to Purchase Requisition-> Add_Item_To_PR
    Search item (i)                     -> Search_Item
    Completed Purchase Requisition      -> Completed_PR
    End Purchase Requisition Request    -> End_PR_Request
    Cancel Purchase Requisition Request -> Cancel_PR_Request
    Add item (i) to System              -> Add_Item_To_System

The scenario graph itself is rebuilt from the transition table, since the
scenario figure is not available.
"""

# (state, guard, next, alt_state, alt_guard), transcribed row by row from the
# published transition table, in its printed order
TABLE2 = [
    ("Purchase_Requisition_Request", "PR_Request", "Validate_User", "", ""),
    ("Validate_User", "Validated_User(U)", "Add_Purchase_Requisition", "Cancel_PR_Request", "not Validated_User(U)"),
    ("Add_Purchase_Requisition", "", "Display_PR_Screen", "", ""),
    ("Display_PR_Screen", "", "Add_Item_To_PR", "", ""),
    ("Add_Item_To_PR", "Add_PR(i)", "Search_Item", "", ""),
    ("Search_Item", "Exist(i)", "Completed_PR", "Add_Item_To_System", "not Exist(i)"),
    ("Completed_PR", "PR(i)", "End_PR_Request", "", ""),
    ("Cancel_PR_Request", "not PR(i)", "End_PR_Request", "", ""),
    ("Add_Item_To_System", "Add(i)", "Completed_PR", "", ""),
]

# the published goals, canonicalized; the third one as printed stops after two literals
TG_PR1 = ["PR_Request", "Validated_User(U)", "Add_PR(i)", "Exist(i)", "PR(i)"]
TG_PR2 = ["PR_Request", "Validated_User(U)", "Add_PR(i)", "not Exist(i)", "Add(i)", "PR(i)"]
TG_PR3_PRINTED = ["PR_Request", "not Validated_User(U)"]
TG_PR3 = TG_PR3_PRINTED + ["not PR(i)"]

SYSTEM_CONTRACT = (
    "Completed_Purchase_Requisition and Completed_Purchase_Order and Completed_Stock_In "
    "and Completed_Store_Requisition and Completed_Stock_Out"
)

# the execution contract as published, with the cancel branch's "not PR(i)"
# added from the Cancel row of the transition table
PR_CONTRACT = (
    "PR_Request and ((Validated_User(U) and Add_PR(i) and (Exist(i) or (not Exist(i) and Add(i))) "
    "and PR(i)) or (not Validated_User(U) and not PR(i)))"
)
PR_CONTRACT_PRINTED = (
    "/PR_Request and ((/Validated_User(U) and /Add_PR(i) and (Exist(i) or (Not /Exist(i) and /Add(i))) "
    "and /PR(i)) or Not /Validated_User(U))"
)
